#include "peakcast/evaluation.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace peakcast {

std::vector<double> evaluate_once(const HybridModel& model, const MultiSeries& train,
                                  const MultiSeries& test) {
    if (test.size() == 0) throw std::invalid_argument("evaluate_once: empty test series");
    if (train.end_date().next() != test.start_date()) {
        throw std::invalid_argument("evaluate_once: test does not follow train");
    }
    const MultiSeries full = train.concat(test);
    const auto forecasts = forecast_batch(model, full, train.size());
    std::vector<double> predicted(forecasts.size());
    for (std::size_t i = 0; i < forecasts.size(); ++i) predicted[i] = forecasts[i].predicted;
    return predicted;
}

namespace {

RunRecord run_one(const MultiSeries& train, const MultiSeries& test, Variant variant,
                  PipelineConfig cfg, std::uint64_t seed) {
    RunRecord rec;
    rec.seed = seed;
    cfg.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const HybridModel model = train_variant(train, variant, cfg);
        const std::vector<double> predicted = evaluate_once(model, train, test);
        std::vector<double> actual(test.size());
        for (std::size_t i = 0; i < test.size(); ++i) actual[i] = test[i].peak;
        rec.metrics = compute_metrics(actual, predicted);
        rec.abs_errors.resize(test.size());
        for (std::size_t i = 0; i < test.size(); ++i) {
            rec.abs_errors[i] = std::fabs(actual[i] - predicted[i]);
        }
    } catch (const std::exception& e) {
        rec.failed = true;
        rec.error = e.what();
    }
    rec.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

void accumulate(double value, double& mean, double& m2, std::size_t n) {
    // Welford update; n is the count *after* including value.
    const double delta = value - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (value - mean);
}

}  // namespace

RepetitionReport repeat_runs(const MultiSeries& train, const MultiSeries& test, Variant variant,
                             const PipelineConfig& base_cfg, std::size_t run_count,
                             std::uint64_t seed_base) {
    if (run_count < 1) throw std::invalid_argument("repeat_runs: run_count must be >= 1");

    RepetitionReport report;
    report.variant = variant;
    report.runs.resize(run_count);

#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(run_count); ++i) {
        report.runs[static_cast<std::size_t>(i)] =
            run_one(train, test, variant, base_cfg,
                    seed_base + static_cast<std::uint64_t>(i));
    }

    // Fixed aggregation order (run index), independent of execution order.
    double m_r2 = 0, m_rmse = 0, m_mape = 0, m_da = 0;
    double s_r2 = 0, s_rmse = 0, s_mape = 0, s_da = 0;
    double runtime_sum = 0.0;
    for (const RunRecord& rec : report.runs) {
        runtime_sum += rec.runtime_seconds;
        if (rec.failed) {
            ++report.failures;
            continue;
        }
        ++report.successful;
        const std::size_t n = report.successful;
        accumulate(rec.metrics.r2, m_r2, s_r2, n);
        accumulate(rec.metrics.rmse, m_rmse, s_rmse, n);
        accumulate(rec.metrics.mape, m_mape, s_mape, n);
        accumulate(rec.metrics.da, m_da, s_da, n);
        if (report.mean_abs_errors.empty()) {
            report.mean_abs_errors.assign(rec.abs_errors.size(), 0.0);
        }
        for (std::size_t j = 0; j < rec.abs_errors.size(); ++j) {
            report.mean_abs_errors[j] += rec.abs_errors[j];
        }
    }
    if (report.successful == 0) {
        throw std::runtime_error("repeat_runs: every run failed; first error: " +
                                 report.runs.front().error);
    }
    const double n = static_cast<double>(report.successful);
    std::size_t sample_n = 0;
    for (const RunRecord& rec : report.runs) {
        if (!rec.failed) {
            sample_n = rec.metrics.n;
            break;
        }
    }
    report.mean_metrics = MetricReport{m_r2, m_rmse, m_mape, m_da, sample_n};
    for (double& v : report.mean_abs_errors) v /= n;
    report.mean_runtime_seconds = runtime_sum / static_cast<double>(run_count);
    const double denom = report.successful > 1 ? n - 1.0 : 1.0;
    report.std_metrics = MetricReport{std::sqrt(s_r2 / denom), std::sqrt(s_rmse / denom),
                                      std::sqrt(s_mape / denom), std::sqrt(s_da / denom),
                                      report.mean_metrics.n};
    return report;
}

}  // namespace peakcast
