#include "peakcast/memd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "peakcast/extrema.hpp"
#include "peakcast/rng.hpp"
#include "peakcast/spline.hpp"

namespace peakcast {

namespace {

// Mirror two extrema beyond each end of [0, L-1] so envelope evaluation over
// the full span stays an interpolation.
void mirror_extend(const std::vector<std::size_t>& times, const std::vector<double>& values,
                   std::size_t length, std::vector<double>& x_out, std::vector<double>& y_out) {
    x_out.clear();
    y_out.clear();

    // Symmetrically reflect up to two knots about each series endpoint.
    // Even reflection keeps the extended knot values inside the observed
    // range, so envelope tails stay bounded instead of extrapolating local
    // trends — trend extrapolation compounds across sift iterations and
    // blows up the low-frequency modes near the boundaries.
    const double t_end = static_cast<double>(length - 1);

    std::vector<std::pair<double, double>> left, right;
    for (std::size_t k = 0; k < times.size() && left.size() < 2; ++k) {
        const double t = static_cast<double>(times[k]);
        if (t > 0.0) left.emplace_back(-t, values[k]);
    }
    for (std::size_t k = times.size(); k-- > 0 && right.size() < 2;) {
        const double t = static_cast<double>(times[k]);
        if (t < t_end) right.emplace_back(2.0 * t_end - t, values[k]);
    }

    for (auto it = left.rbegin(); it != left.rend(); ++it) {
        x_out.push_back(it->first);
        y_out.push_back(it->second);
    }
    for (std::size_t k = 0; k < times.size(); ++k) {
        x_out.push_back(static_cast<double>(times[k]));
        y_out.push_back(values[k]);
    }
    for (const auto& [xv, yv] : right) {
        x_out.push_back(xv);
        y_out.push_back(yv);
    }
}

struct DirectionEnvelope {
    bool excluded = true;
    std::vector<std::vector<double>> mean;  // (upper + lower) / 2, m x L
};

DirectionEnvelope direction_envelope(const ChannelMatrix& X, std::span<const double> direction,
                                     std::size_t min_extrema) {
    DirectionEnvelope out;
    const std::vector<double> p = project(X, direction);
    const ExtremaResult ext = find_extrema(p);
    if (ext.maxima.size() < min_extrema || ext.minima.size() < min_extrema) return out;

    const auto upper = spline_envelope(ext.maxima, X);
    const auto lower = spline_envelope(ext.minima, X);
    if (!upper || !lower) return out;

    const std::size_t m = X.dim(), length = X.length();
    out.excluded = false;
    out.mean.assign(m, std::vector<double>(length));
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t t = 0; t < length; ++t) {
            out.mean[c][t] = 0.5 * (upper->values[c][t] + lower->values[c][t]);
        }
    }
    return out;
}

MeanEnvelopeResult combine_direction_envelopes(const ChannelMatrix& X,
                                               const std::vector<DirectionEnvelope>& slots) {
    const std::size_t m = X.dim(), length = X.length();
    MeanEnvelopeResult out;
    out.mean.assign(m, std::vector<double>(length, 0.0));
    // Fixed-order accumulation keeps the result independent of scheduling.
    for (const DirectionEnvelope& env : slots) {
        if (env.excluded) {
            ++out.excluded;
            continue;
        }
        for (std::size_t c = 0; c < m; ++c) {
            for (std::size_t t = 0; t < length; ++t) out.mean[c][t] += env.mean[c][t];
        }
    }
    if (out.excluded == slots.size()) {
        out.no_oscillation = true;
        return out;
    }
    const double scale = 1.0 / static_cast<double>(slots.size() - out.excluded);
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t t = 0; t < length; ++t) out.mean[c][t] *= scale;
    }
    return out;
}

double frobenius_sq(const std::vector<std::vector<double>>& rows) {
    double sum = 0.0;
    for (const auto& row : rows) {
        for (double v : row) sum += v * v;
    }
    return sum;
}

ImfSet decompose(ChannelMatrix X, const DirectionSet& dirs, const SiftConfig& cfg) {
    ImfSet out;
    ChannelMatrix remainder = X;
    while (true) {
        const SiftResult s = sift(remainder, dirs, cfg);
        if (s.no_oscillation) break;
        out.modes.push_back(s.imf);
        remainder = s.remainder;
    }
    out.residue = std::move(remainder);
    return out;
}

}  // namespace

double ImfSet::reconstruction_error(const ChannelMatrix& X) const {
    double worst = 0.0;
    for (std::size_t c = 0; c < X.dim(); ++c) {
        double amplitude = 0.0;
        for (double v : X.channels[c]) amplitude = std::max(amplitude, std::abs(v));
        if (amplitude == 0.0) amplitude = 1.0;
        for (std::size_t t = 0; t < X.length(); ++t) {
            double recon = residue.channels[c][t];
            for (const ChannelMatrix& mode : modes) recon += mode.channels[c][t];
            worst = std::max(worst, std::abs(recon - X.channels[c][t]) / amplitude);
        }
    }
    return worst;
}

std::vector<double> project(const ChannelMatrix& X, std::span<const double> direction) {
    if (direction.size() != X.dim()) throw std::invalid_argument("project: dimension mismatch");
    std::vector<double> p(X.length(), 0.0);
    for (std::size_t c = 0; c < X.dim(); ++c) {
        const double w = direction[c];
        const auto& channel = X.channels[c];
        for (std::size_t t = 0; t < p.size(); ++t) p[t] += w * channel[t];
    }
    return p;
}

std::optional<Envelope> spline_envelope(const std::vector<std::size_t>& times,
                                        const ChannelMatrix& X) {
    if (times.size() < 3) return std::nullopt;
    Envelope env;
    env.times = times;
    env.values.assign(X.dim(), std::vector<double>(X.length()));
    std::vector<double> knot_values(times.size()), xs, ys;
    for (std::size_t c = 0; c < X.dim(); ++c) {
        for (std::size_t k = 0; k < times.size(); ++k) knot_values[k] = X.channels[c][times[k]];
        mirror_extend(times, knot_values, X.length(), xs, ys);
        const CubicSpline spline(xs, ys);
        spline.sample_integers(X.length(), env.values[c]);
    }
    return env;
}

MeanEnvelopeResult mean_envelope(const ChannelMatrix& X, const DirectionSet& dirs,
                                 const SiftConfig& cfg) {
    if (dirs.K == 0) throw std::invalid_argument("mean_envelope: empty direction set");
    std::vector<DirectionEnvelope> slots(dirs.K);
    if (cfg.parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long k = 0; k < static_cast<long>(dirs.K); ++k) {
            slots[k] = direction_envelope(X, dirs.vectors[k], cfg.min_extrema);
        }
    } else {
        for (std::size_t k = 0; k < dirs.K; ++k) {
            slots[k] = direction_envelope(X, dirs.vectors[k], cfg.min_extrema);
        }
    }
    return combine_direction_envelopes(X, slots);
}

SiftResult sift(const ChannelMatrix& X, const DirectionSet& dirs, const SiftConfig& cfg) {
    if (cfg.max_sift_iterations < 1) throw std::invalid_argument("sift: max iterations must be >= 1");
    SiftResult out;
    ChannelMatrix h = X;
    for (std::size_t it = 0; it < cfg.max_sift_iterations; ++it) {
        const MeanEnvelopeResult env = mean_envelope(h, dirs, cfg);
        if (env.no_oscillation) {
            if (it == 0) {
                out.no_oscillation = true;
                return out;
            }
            break;  // remaining h has no removable local mean; accept as mode
        }
        const double ratio = frobenius_sq(env.mean) / frobenius_sq(h.channels);
        for (std::size_t c = 0; c < h.dim(); ++c) {
            for (std::size_t t = 0; t < h.length(); ++t) h.channels[c][t] -= env.mean[c][t];
        }
        ++out.iterations;
        if (ratio < cfg.sift_tolerance) break;
    }
    out.remainder = X;
    for (std::size_t c = 0; c < X.dim(); ++c) {
        for (std::size_t t = 0; t < X.length(); ++t) {
            out.remainder.channels[c][t] -= h.channels[c][t];
        }
    }
    out.imf = std::move(h);
    return out;
}

ImfSet memd(const ChannelMatrix& X, const SiftConfig& cfg) {
    if (X.dim() < 2) throw std::invalid_argument("memd: need m >= 2 channels (use emd)");
    if (X.length() < 16) throw std::invalid_argument("memd: series too short (L >= 16)");
    const DirectionSet dirs = hammersley_directions(cfg.num_directions, X.dim());
    return decompose(X, dirs, cfg);
}

ImfSet emd(std::span<const double> x, const SiftConfig& cfg) {
    if (x.size() < 4) throw std::invalid_argument("emd: series too short");
    ChannelMatrix X;
    X.labels = {"signal"};
    X.channels = {std::vector<double>(x.begin(), x.end())};
    DirectionSet identity;
    identity.K = 1;
    identity.m = 1;
    identity.vectors = {{1.0}};
    return decompose(std::move(X), identity, cfg);
}

ImfSet eemd(std::span<const double> x, double nstd, std::size_t ensemble_size,
            const SiftConfig& cfg, std::uint64_t seed) {
    if (nstd < 0.0) throw std::invalid_argument("eemd: nstd must be >= 0");
    if (ensemble_size < 1) throw std::invalid_argument("eemd: ensemble size must be >= 1");
    if (nstd == 0.0 && ensemble_size == 1) return emd(x, cfg);

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    const double noise_std =
        nstd * std::sqrt(var / static_cast<double>(x.size() > 1 ? x.size() - 1 : 1));

    std::vector<ImfSet> members;
    members.reserve(ensemble_size);
    std::vector<double> perturbed(x.begin(), x.end());
    for (std::size_t e = 0; e < ensemble_size; ++e) {
        if (nstd > 0.0) {
            Rng rng(mix_seed(seed, e));
            for (std::size_t t = 0; t < perturbed.size(); ++t) {
                perturbed[t] = x[t] + noise_std * rng.normal();
            }
        }
        members.push_back(emd(perturbed, cfg));
    }

    std::size_t n_max = 0;
    for (const ImfSet& s : members) n_max = std::max(n_max, s.n_modes());

    ImfSet out;
    const std::size_t length = x.size();
    ChannelMatrix zero;
    zero.labels = {"signal"};
    zero.channels = {std::vector<double>(length, 0.0)};
    out.modes.assign(n_max, zero);
    out.residue = zero;
    const double inv = 1.0 / static_cast<double>(ensemble_size);
    for (const ImfSet& s : members) {
        for (std::size_t i = 0; i < n_max; ++i) {
            if (i >= s.n_modes()) continue;  // zero-padded member
            for (std::size_t t = 0; t < length; ++t) {
                out.modes[i].channels[0][t] += s.modes[i].channels[0][t] * inv;
            }
        }
        for (std::size_t t = 0; t < length; ++t) {
            out.residue.channels[0][t] += s.residue.channels[0][t] * inv;
        }
    }
    return out;
}

namespace reference {

// Written independently of the kernel above on purpose; tests compare the
// two and the benchmark times them against each other.
MeanEnvelopeResult mean_envelope_serial(const ChannelMatrix& X, const DirectionSet& dirs,
                                        std::size_t min_extrema) {
    const std::size_t m = X.dim(), length = X.length();
    MeanEnvelopeResult out;
    out.mean.assign(m, std::vector<double>(length, 0.0));
    for (std::size_t k = 0; k < dirs.K; ++k) {
        std::vector<double> p(length, 0.0);
        for (std::size_t t = 0; t < length; ++t) {
            for (std::size_t c = 0; c < m; ++c) p[t] += X.channels[c][t] * dirs.vectors[k][c];
        }
        const ExtremaResult ext = find_extrema(p);
        if (ext.maxima.size() < min_extrema || ext.minima.size() < min_extrema) {
            ++out.excluded;
            continue;
        }
        const auto upper = spline_envelope(ext.maxima, X);
        const auto lower = spline_envelope(ext.minima, X);
        for (std::size_t c = 0; c < m; ++c) {
            for (std::size_t t = 0; t < length; ++t) {
                out.mean[c][t] += 0.5 * (upper->values[c][t] + lower->values[c][t]);
            }
        }
    }
    if (out.excluded == dirs.K) {
        out.no_oscillation = true;
        return out;
    }
    const double scale = 1.0 / static_cast<double>(dirs.K - out.excluded);
    for (auto& row : out.mean) {
        for (double& v : row) v *= scale;
    }
    return out;
}

}  // namespace reference

}  // namespace peakcast
