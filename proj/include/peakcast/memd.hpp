#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "peakcast/hammersley.hpp"
#include "peakcast/series.hpp"

namespace peakcast {

struct SiftConfig {
    std::size_t max_sift_iterations = 10;
    // Stop sifting when ||env_mean||^2 / ||h||^2 drops below this.
    double sift_tolerance = 1e-4;
    std::size_t min_extrema = 3;
    std::size_t num_directions = 256;
    // Directional envelopes are evaluated concurrently when true; the
    // result is bit-identical either way (fixed-order accumulation).
    bool parallel = true;
};

// Aligned multivariate decomposition: n modes plus residue. Component i for
// i in [0, n) is mode i; component n is the residue, so the n+1 components
// run high frequency -> low frequency -> trend.
struct ImfSet {
    std::vector<ChannelMatrix> modes;
    ChannelMatrix residue;

    std::size_t n_modes() const { return modes.size(); }
    std::size_t n_components() const { return modes.size() + 1; }
    const ChannelMatrix& component(std::size_t i) const {
        return i < modes.size() ? modes[i] : residue;
    }

    // Max relative L-inf reconstruction error of sum(modes) + residue vs X.
    double reconstruction_error(const ChannelMatrix& X) const;
};

// One directional envelope: curves per channel plus the defining knots.
struct Envelope {
    std::vector<std::vector<double>> values;  // m x L
    std::vector<std::size_t> times;
};

struct MeanEnvelopeResult {
    std::vector<std::vector<double>> mean;  // m x L
    std::size_t excluded = 0;               // C of Eq-style exclusion rule
    bool no_oscillation = false;            // all K directions excluded
};

struct SiftResult {
    ChannelMatrix imf;
    ChannelMatrix remainder;
    bool no_oscillation = false;
    std::size_t iterations = 0;
};

// p(t) = sum_c X_c(t) * dir_c.
std::vector<double> project(const ChannelMatrix& X, std::span<const double> direction);

// Natural cubic spline through each channel's values at the given times,
// mirror-extended by two knots at each end. Empty when times.size() < 3.
std::optional<Envelope> spline_envelope(const std::vector<std::size_t>& times,
                                        const ChannelMatrix& X);

// Average of per-direction envelopes (mean of the upper and lower envelope
// of X at the projection's maxima/minima). Directions whose projection has
// fewer than min_extrema maxima or minima are excluded and counted.
MeanEnvelopeResult mean_envelope(const ChannelMatrix& X, const DirectionSet& dirs,
                                 const SiftConfig& cfg);

// One mode extraction: h <- h - env_mean(h) until the stop criterion.
SiftResult sift(const ChannelMatrix& X, const DirectionSet& dirs, const SiftConfig& cfg);

// Full multivariate decomposition (m >= 2, L >= 16), seed-free.
ImfSet memd(const ChannelMatrix& X, const SiftConfig& cfg);

// Univariate specialization: envelopes from the signal's own extrema.
ImfSet emd(std::span<const double> x, const SiftConfig& cfg);

// Ensemble EMD over NE noise-perturbed copies (noise std = nstd * std(x)).
// With nstd = 0, ensemble_size = 1 this equals emd(x) bitwise. Members with
// fewer modes are zero-padded before averaging.
ImfSet eemd(std::span<const double> x, double nstd, std::size_t ensemble_size,
            const SiftConfig& cfg, std::uint64_t seed);

namespace reference {
// Straight-line serial implementation of the envelope-mean kernel, kept as
// the oracle for the OpenMP path and for the benchmark.
MeanEnvelopeResult mean_envelope_serial(const ChannelMatrix& X, const DirectionSet& dirs,
                                        std::size_t min_extrema);
}  // namespace reference

}  // namespace peakcast
