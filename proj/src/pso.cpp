#include "peakcast/pso.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "peakcast/csv.hpp"

namespace peakcast {

namespace {

double to_internal(const BoundDim& dim, double raw) {
    return dim.log_scale ? std::log10(raw) : raw;
}

double to_raw(const BoundDim& dim, double internal) {
    return dim.log_scale ? std::pow(10.0, internal) : internal;
}

std::vector<double> raw_position(const Bounds& bounds, const std::vector<double>& internal) {
    std::vector<double> raw(internal.size());
    for (std::size_t d = 0; d < internal.size(); ++d) raw[d] = to_raw(bounds.dims[d], internal[d]);
    return raw;
}

double safe_fitness(const FitnessFn& fitness, const std::vector<double>& raw) {
    double v;
    try {
        v = fitness(raw);
    } catch (const std::exception&) {
        v = std::numeric_limits<double>::infinity();
    }
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

void PsoConfig::validate() const {
    if (pop < 1) throw std::invalid_argument("PsoConfig: pop must be >= 1");
    if (iterations < 1) throw std::invalid_argument("PsoConfig: iterations must be >= 1");
    if (c1 < 0.0 || c2 < 0.0) throw std::invalid_argument("PsoConfig: coefficients must be >= 0");
    if (!(w_max >= w_min && w_min >= 0.0)) {
        throw std::invalid_argument("PsoConfig: need w_max >= w_min >= 0");
    }
    if (!(velocity_fraction > 0.0)) {
        throw std::invalid_argument("PsoConfig: velocity_fraction must be > 0");
    }
}

void Bounds::validate() const {
    if (dims.empty()) throw std::invalid_argument("Bounds: no dimensions");
    for (const BoundDim& d : dims) {
        if (!(d.hi > d.lo)) throw std::invalid_argument("Bounds: max must exceed min");
        if (d.log_scale && !(d.lo > 0.0)) {
            throw std::invalid_argument("Bounds: log-scaled dimension needs positive bounds");
        }
    }
}

SwarmState pso_initialize(const Bounds& bounds, const PsoConfig& cfg, std::uint64_t seed,
                          const FitnessFn& fitness) {
    cfg.validate();
    bounds.validate();
    const std::size_t dims = bounds.size();

    SwarmState state;
    state.rng = Rng(seed);
    state.positions.assign(cfg.pop, std::vector<double>(dims));
    state.velocities.assign(cfg.pop, std::vector<double>(dims));
    for (std::size_t p = 0; p < cfg.pop; ++p) {
        for (std::size_t d = 0; d < dims; ++d) {
            const double lo = to_internal(bounds.dims[d], bounds.dims[d].lo);
            const double hi = to_internal(bounds.dims[d], bounds.dims[d].hi);
            const double v_max = cfg.velocity_fraction * (hi - lo);
            state.positions[p][d] = lo + state.rng.uniform() * (hi - lo);
            state.velocities[p][d] = -v_max + state.rng.uniform() * (2.0 * v_max);
        }
    }

    state.pbest_position = state.positions;
    state.pbest_fitness.assign(cfg.pop, std::numeric_limits<double>::infinity());
    std::vector<double> fits(cfg.pop);
#pragma omp parallel for schedule(dynamic)
    for (long p = 0; p < static_cast<long>(cfg.pop); ++p) {
        fits[p] = safe_fitness(fitness, raw_position(bounds, state.positions[p]));
    }
    state.gbest_fitness = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < cfg.pop; ++p) {
        state.pbest_fitness[p] = fits[p];
        if (fits[p] < state.gbest_fitness) {
            state.gbest_fitness = fits[p];
            state.gbest_position = state.positions[p];
        }
    }
    if (state.gbest_position.empty()) state.gbest_position = state.positions[0];
    return state;
}

void pso_step(SwarmState& state, const FitnessFn& fitness, const Bounds& bounds,
              const PsoConfig& cfg) {
    const std::size_t dims = bounds.size();
    const double w =
        cfg.w_max - (cfg.w_max - cfg.w_min) / static_cast<double>(cfg.iterations) *
                        static_cast<double>(state.iteration);

    // Move every particle against the current gbest (synchronous update);
    // RNG draws happen here, sequentially, so fitness evaluation order
    // cannot change the outcome.
    for (std::size_t p = 0; p < state.positions.size(); ++p) {
        for (std::size_t d = 0; d < dims; ++d) {
            const double lo = to_internal(bounds.dims[d], bounds.dims[d].lo);
            const double hi = to_internal(bounds.dims[d], bounds.dims[d].hi);
            const double v_max = cfg.velocity_fraction * (hi - lo);
            const double r1 = state.rng.uniform();
            const double r2 = state.rng.uniform();
            double v = w * state.velocities[p][d] +
                       cfg.c1 * r1 * (state.pbest_position[p][d] - state.positions[p][d]) +
                       cfg.c2 * r2 * (state.gbest_position[d] - state.positions[p][d]);
            v = std::clamp(v, -v_max, v_max);
            double x = state.positions[p][d] + v;
            if (x < lo) {
                x = lo;
                v = 0.0;
            } else if (x > hi) {
                x = hi;
                v = 0.0;
            }
            state.velocities[p][d] = v;
            state.positions[p][d] = x;
        }
    }

    std::vector<double> fits(state.positions.size());
#pragma omp parallel for schedule(dynamic)
    for (long p = 0; p < static_cast<long>(state.positions.size()); ++p) {
        fits[p] = safe_fitness(fitness, raw_position(bounds, state.positions[p]));
    }
    for (std::size_t p = 0; p < state.positions.size(); ++p) {
        if (fits[p] < state.pbest_fitness[p]) {
            state.pbest_fitness[p] = fits[p];
            state.pbest_position[p] = state.positions[p];
        }
        if (fits[p] < state.gbest_fitness) {
            state.gbest_fitness = fits[p];
            state.gbest_position = state.positions[p];
        }
    }
    ++state.iteration;
}

PsoResult pso_optimize(const FitnessFn& fitness, const Bounds& bounds, const PsoConfig& cfg,
                       std::uint64_t seed) {
    SwarmState state = pso_initialize(bounds, cfg, seed, fitness);
    PsoResult result;
    result.trace.push_back({0, state.gbest_fitness, raw_position(bounds, state.gbest_position)});
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        pso_step(state, fitness, bounds, cfg);
        result.trace.push_back(
            {it + 1, state.gbest_fitness, raw_position(bounds, state.gbest_position)});
    }
    result.best_position = raw_position(bounds, state.gbest_position);
    result.best_fitness = state.gbest_fitness;
    return result;
}

void write_trace_csv(const std::string& path, const std::vector<TracePoint>& trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "iteration,best_fitness";
    if (!trace.empty()) {
        for (std::size_t d = 0; d < trace[0].best_position.size(); ++d) out << ",x" << d;
    }
    out << "\n";
    for (const TracePoint& t : trace) {
        out << t.iteration << ',' << csv::format_double(t.best_fitness);
        for (double v : t.best_position) out << ',' << csv::format_double(v);
        out << "\n";
    }
}

}  // namespace peakcast
