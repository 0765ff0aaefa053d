#pragma once

#include <span>
#include <string>
#include <vector>

#include "peakcast/windows.hpp"

namespace peakcast {

struct SvrHyper {
    double C = 64.0;
    double epsilon = 0.001;
    double gamma = 2.0;

    void validate() const;
};

// Baseline triple used by the non-tuned comparison models and the ensemble.
inline SvrHyper baseline_hyper() { return SvrHyper{64.0, 0.001, 2.0}; }

// Min-max scaler to [0,1] per feature and for the target, fitted on training
// data only. Constant features map to 0; out-of-range values pass through
// unclipped (plain affine map).
struct Scaler {
    std::vector<double> feature_min, feature_max;
    double target_min = 0.0, target_max = 1.0;

    static Scaler fit(const WindowSet& windows);

    std::vector<double> apply_features(std::span<const double> x) const;
    double apply_target(double y) const;
    double invert_target(double y) const;
};

double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma);

// Trained epsilon-insensitive regressor. Only support vectors with
// |beta| > 1e-12 are stored; prediction is sum beta_i K(sv_i, x) + bias in
// scaled space.
struct SvrModel {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> dual_coefficients;  // beta_i = alpha_i - alpha_i*
    double bias = 0.0;
    SvrHyper hyper;
    Scaler scaler;
    std::size_t iterations = 0;
    double final_gap = 0.0;

    std::size_t feature_width() const { return scaler.feature_min.size(); }
};

// SMO over the dual of the epsilon-insensitive problem; maximal-violating-
// pair working set with lowest-index tie-breaking, stop when the KKT
// violation gap falls below kkt_tolerance.
SvrModel train_svr(const std::vector<std::vector<double>>& scaled_inputs,
                   const std::vector<double>& scaled_targets, const SvrHyper& hyper,
                   double kkt_tolerance = 1e-3, std::size_t max_steps = 10'000'000);

// Convenience: fit the scaler on `windows`, scale, train, attach the scaler.
SvrModel train_svr_on_windows(const WindowSet& windows, const SvrHyper& hyper,
                              double kkt_tolerance = 1e-3,
                              std::size_t max_steps = 10'000'000);

// Raw feature vector in, raw target out (scaling applied both ways).
double predict(const SvrModel& model, std::span<const double> x);

// Flat text persistence, 17 significant digits; load(save(m)) == m.
void save_svr(const SvrModel& model, const std::string& path);
SvrModel load_svr(const std::string& path);

}  // namespace peakcast
