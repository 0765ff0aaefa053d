#include "peakcast/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace peakcast {

namespace {

void check_lengths(std::span<const double> a, std::span<const double> b, std::size_t min_len,
                   const char* who) {
    if (a.size() != b.size()) throw std::invalid_argument(std::string(who) + ": length mismatch");
    if (a.size() < min_len) throw std::invalid_argument(std::string(who) + ": series too short");
}

double mean_of(std::span<const double> v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

// Regularized incomplete beta I_x(a, b), Lentz continued fraction.
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 1e-15;
    constexpr double kFpMin = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

}  // namespace

double r2(std::span<const double> actual, std::span<const double> predicted) {
    check_lengths(actual, predicted, 2, "r2");
    const double mean = mean_of(actual);
    double sse = 0.0, sst = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) {
        sse += (actual[t] - predicted[t]) * (actual[t] - predicted[t]);
        sst += (actual[t] - mean) * (actual[t] - mean);
    }
    if (sst == 0.0) throw std::invalid_argument("r2: actual series has zero variance");
    return 1.0 - sse / sst;
}

double rmse(std::span<const double> actual, std::span<const double> predicted) {
    check_lengths(actual, predicted, 1, "rmse");
    double sse = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) {
        sse += (actual[t] - predicted[t]) * (actual[t] - predicted[t]);
    }
    return std::sqrt(sse / static_cast<double>(actual.size()));
}

double mape(std::span<const double> actual, std::span<const double> predicted) {
    check_lengths(actual, predicted, 1, "mape");
    double sum = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) {
        if (actual[t] == 0.0) throw std::invalid_argument("mape: zero actual value");
        sum += std::abs((actual[t] - predicted[t]) / actual[t]);
    }
    return sum / static_cast<double>(actual.size()) * 100.0;
}

double da(std::span<const double> actual, std::span<const double> predicted) {
    check_lengths(actual, predicted, 2, "da");
    std::size_t hits = 0;
    for (std::size_t t = 1; t < actual.size(); ++t) {
        const double move = (actual[t] - actual[t - 1]) * (predicted[t] - predicted[t - 1]);
        if (move >= 0.0) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(actual.size() - 1) * 100.0;
}

MetricReport compute_metrics(std::span<const double> actual, std::span<const double> predicted) {
    MetricReport report;
    report.n = actual.size();
    report.r2 = r2(actual, predicted);
    report.rmse = rmse(actual, predicted);
    report.mape = mape(actual, predicted);
    report.da = da(actual, predicted);
    return report;
}

DmResult dm_test(std::span<const double> losses_a, std::span<const double> losses_b) {
    check_lengths(losses_a, losses_b, 2, "dm_test");
    const std::size_t n = losses_a.size();
    std::vector<double> d(n);
    for (std::size_t t = 0; t < n; ++t) d[t] = losses_a[t] - losses_b[t];
    const double d_mean = mean_of(d);
    double ss = 0.0;
    for (double v : d) ss += (v - d_mean) * (v - d_mean);
    const double d_std = std::sqrt(ss / static_cast<double>(n - 1));
    if (d_std == 0.0) throw std::invalid_argument("dm_test: degenerate comparison (d_std = 0)");
    DmResult out;
    out.length = n;
    out.dm = d_mean / d_std;
    out.p_value = normal_two_sided_p(out.dm);
    return out;
}

DmResult dm_classical(std::span<const double> losses_a, std::span<const double> losses_b) {
    DmResult out = dm_test(losses_a, losses_b);
    out.dm *= std::sqrt(static_cast<double>(out.length));
    out.p_value = normal_two_sided_p(out.dm);
    return out;
}

AnovaResult anova_f(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) throw std::invalid_argument("anova_f: need at least 2 groups");
    std::size_t total_n = 0;
    double grand_sum = 0.0;
    for (const auto& g : groups) {
        if (g.size() < 2) throw std::invalid_argument("anova_f: each group needs >= 2 values");
        total_n += g.size();
        for (double v : g) grand_sum += v;
    }
    const double grand_mean = grand_sum / static_cast<double>(total_n);

    double ss_between = 0.0, ss_within = 0.0;
    for (const auto& g : groups) {
        const double gm = mean_of(g);
        ss_between += static_cast<double>(g.size()) * (gm - grand_mean) * (gm - grand_mean);
        for (double v : g) ss_within += (v - gm) * (v - gm);
    }
    const std::size_t df1 = groups.size() - 1;
    const std::size_t df2 = total_n - groups.size();
    if (ss_within == 0.0) throw std::invalid_argument("anova_f: zero within-group variance");

    AnovaResult out;
    out.df_between = df1;
    out.df_within = df2;
    out.f = (ss_between / static_cast<double>(df1)) / (ss_within / static_cast<double>(df2));
    out.p_value = f_upper_tail_p(out.f, static_cast<double>(df1), static_cast<double>(df2));
    return out;
}

double normal_two_sided_p(double statistic) {
    return std::erfc(std::abs(statistic) / std::sqrt(2.0));
}

double f_upper_tail_p(double f, double df1, double df2) {
    if (f <= 0.0) return 1.0;
    return incomplete_beta(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f));
}

}  // namespace peakcast
