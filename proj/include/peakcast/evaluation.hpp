#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "peakcast/metrics.hpp"
#include "peakcast/pipeline.hpp"
#include "peakcast/series.hpp"

namespace peakcast {

// One train+evaluate cycle of a model variant under a specific seed.
struct RunRecord {
    std::uint64_t seed = 0;
    bool failed = false;
    std::string error;
    MetricReport metrics;
    std::vector<double> abs_errors;  // |actual - predicted| per test day
    double runtime_seconds = 0.0;
};

// Aggregate over repeated seeded runs of one variant.
struct RepetitionReport {
    Variant variant = Variant::Svr;
    std::vector<RunRecord> runs;
    std::size_t successful = 0;
    std::size_t failures = 0;
    MetricReport mean_metrics;
    MetricReport std_metrics;            // sample std (n-1) over successful runs
    std::vector<double> mean_abs_errors; // per test day, averaged over runs
    double mean_runtime_seconds = 0.0;
};

// Train on `train` and forecast every day of `test`, returning predictions in
// test order. `train` and `test` must be consecutive.
std::vector<double> evaluate_once(const HybridModel& model, const MultiSeries& train,
                                  const MultiSeries& test);

// Train+evaluate `run_count` times with seeds seed_base .. seed_base+count-1.
// Failed runs are recorded (failed flag + message) and excluded from means.
RepetitionReport repeat_runs(const MultiSeries& train, const MultiSeries& test, Variant variant,
                             const PipelineConfig& base_cfg, std::size_t run_count,
                             std::uint64_t seed_base);

}  // namespace peakcast
