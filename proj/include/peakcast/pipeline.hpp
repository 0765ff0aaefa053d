#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "peakcast/memd.hpp"
#include "peakcast/pso.hpp"
#include "peakcast/series.hpp"
#include "peakcast/svr.hpp"

namespace peakcast {

// The proposed model plus the comparison models built in this codebase.
enum class Variant {
    MemdPsoSvr,  // the hybrid: MEMD + per-component PSO-tuned SVR + ensemble SVR
    Svr,         // single SVR on raw 4-channel windows, fixed hyperparameters
    EemdSvr,     // univariate EEMD of the peak channel, fixed-parameter SVRs
    EemdPsoSvr,  // same with PSO tuning per component
    MemdSvr,     // MEMD pipeline with fixed hyperparameters (no PSO)
};

std::string variant_name(Variant v);
Variant parse_variant(const std::string& name);

struct PipelineConfig {
    std::size_t d = 6;  // embedded dimension
    SiftConfig sift;
    PsoConfig pso;
    Bounds bounds = svr_search_bounds();
    SvrHyper baseline = baseline_hyper();
    // Ensemble SVR hyperparameters. The ensemble's inputs are the n+1 stacked
    // component predictions, whose training rows trace the (roughly
    // one-dimensional) seasonal trajectory through that space; a near-global
    // kernel (small gamma) is needed so the learned recombination stays close
    // to additive away from the trajectory, where forecast-time rows land.
    SvrHyper ensemble = SvrHyper{64.0, 0.001, 0.1};
    // Chronological PSO fitness holdout: last fraction of the training windows.
    double holdout_fraction = 0.2;
    // Solver step budget for hyperparameter-search fitness evaluations only;
    // candidates that fail to converge within it score +inf and are pruned.
    // Final component training always gets the full solver budget.
    std::size_t tuning_max_steps = 300'000;
    double kkt_tolerance = 1e-3;
    std::uint64_t seed = 0;
    // When true, test-time forecasting re-decomposes per forecast day using
    // only past data instead of one batch decomposition.
    bool strict_causal = false;
    double eemd_nstd = 0.0;
    std::size_t eemd_ne = 1;
};

struct ComponentModel {
    std::size_t index = 0;  // 0..n-1 modes, n = residue
    SvrModel model;
    SvrHyper hyper;
    double fitness = 0.0;  // holdout MAPE reached by PSO; NaN for fixed models
};

struct HybridModel {
    Variant variant = Variant::MemdPsoSvr;
    PipelineConfig cfg;
    std::vector<ComponentModel> components;
    SvrModel ensemble;
    bool has_ensemble = false;
    std::size_t n_modes = 0;
    // Raw training series; forecasting extends its decomposition, so the
    // persisted model is self-contained.
    MultiSeries train_series;

    std::string model_id() const { return variant_name(variant); }
};

struct ForecastResult {
    Date date;
    double predicted = 0.0;
    std::vector<double> contributions;  // per-component predictions
    std::string model_id;
};

HybridModel train_variant(const MultiSeries& train, Variant variant, const PipelineConfig& cfg);

inline HybridModel train_hybrid(const MultiSeries& train, const PipelineConfig& cfg) {
    return train_variant(train, Variant::MemdPsoSvr, cfg);
}

// Forecast the given target days of `full` (which must extend the model's
// training series). Targets are day indices into `full`; every target needs
// at least d observed days before it.
std::vector<ForecastResult> forecast_batch(const HybridModel& model, const MultiSeries& full,
                                           std::size_t first_target);

// Batch decomposition is injectable so single-day and whole-span forecasts
// can be checked for equivalence on the same decomposition.
std::vector<ForecastResult> forecast_with_decomposition(const HybridModel& model,
                                                        const MultiSeries& full,
                                                        const ImfSet& decomposition,
                                                        const std::vector<std::size_t>& targets);

// Decomposition of the first `prefix_length` days of `full` in the layout
// the model was trained on (MEMD 4-channel, EEMD peak-only, none for plain).
ImfSet decompose_for_model(const HybridModel& model, const MultiSeries& full,
                           std::size_t prefix_length);

// Next-day forecast from a history ending at the last observed day.
ForecastResult forecast(const HybridModel& model, const MultiSeries& history);

void save_model(const HybridModel& model, const std::string& dir);
HybridModel load_model(const std::string& dir);

}  // namespace peakcast
