#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "peakcast/rng.hpp"

namespace peakcast {

struct PsoConfig {
    std::size_t pop = 30;
    std::size_t iterations = 100;
    double c1 = 1.5;
    double c2 = 1.6;
    double w_max = 0.9;
    double w_min = 0.4;
    // |velocity| is bounded by this fraction of each dimension's box range.
    double velocity_fraction = 0.2;

    void validate() const;
};

struct BoundDim {
    double lo = 0.0;
    double hi = 1.0;
    // Searched in log10 space when set; fitness still sees raw coordinates.
    bool log_scale = false;
};

struct Bounds {
    std::vector<BoundDim> dims;

    std::size_t size() const { return dims.size(); }
    void validate() const;
};

// Hyperparameter search box, position layout {C, gamma, epsilon}. C and
// gamma span decades and are searched on a log10 scale; epsilon is linear.
inline Bounds svr_search_bounds() {
    return Bounds{{BoundDim{1e-1, 1e3, true},     // C
                   BoundDim{1e-3, 1e3, true},     // gamma
                   BoundDim{1e-3, 1e-1, false}}}; // epsilon
}

using FitnessFn = std::function<double(const std::vector<double>&)>;

struct SwarmState {
    // Internal (possibly log-scaled) coordinates.
    std::vector<std::vector<double>> positions;
    std::vector<std::vector<double>> velocities;
    std::vector<std::vector<double>> pbest_position;
    std::vector<double> pbest_fitness;
    std::vector<double> gbest_position;
    double gbest_fitness = 0.0;
    std::size_t iteration = 0;
    Rng rng{0};
};

struct TracePoint {
    std::size_t iteration;
    double best_fitness;
    std::vector<double> best_position;  // raw coordinates
};

struct PsoResult {
    std::vector<double> best_position;  // raw coordinates
    double best_fitness = 0.0;
    std::vector<TracePoint> trace;
};

SwarmState pso_initialize(const Bounds& bounds, const PsoConfig& cfg, std::uint64_t seed,
                          const FitnessFn& fitness);

// One iteration: inertia decays linearly with the iteration counter, fresh
// r1/r2 per particle per dimension, positions clamped to the box (offending
// velocity component zeroed). Non-finite fitness counts as +infinity.
void pso_step(SwarmState& state, const FitnessFn& fitness, const Bounds& bounds,
              const PsoConfig& cfg);

PsoResult pso_optimize(const FitnessFn& fitness, const Bounds& bounds, const PsoConfig& cfg,
                       std::uint64_t seed);

void write_trace_csv(const std::string& path, const std::vector<TracePoint>& trace);

}  // namespace peakcast
