#include "peakcast/svr.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "peakcast/csv.hpp"

namespace peakcast {

void SvrHyper::validate() const {
    if (!(C > 0.0) || !std::isfinite(C)) throw std::invalid_argument("SvrHyper: C must be > 0");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("SvrHyper: epsilon must be > 0");
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("SvrHyper: gamma must be > 0");
    }
}

Scaler Scaler::fit(const WindowSet& windows) {
    if (windows.size() == 0) throw std::invalid_argument("Scaler::fit: empty window set");
    const std::size_t width = windows.feature_width();
    Scaler s;
    s.feature_min.assign(width, std::numeric_limits<double>::infinity());
    s.feature_max.assign(width, -std::numeric_limits<double>::infinity());
    for (const auto& x : windows.inputs) {
        for (std::size_t f = 0; f < width; ++f) {
            s.feature_min[f] = std::min(s.feature_min[f], x[f]);
            s.feature_max[f] = std::max(s.feature_max[f], x[f]);
        }
    }
    s.target_min = windows.targets[0];
    s.target_max = windows.targets[0];
    for (double y : windows.targets) {
        s.target_min = std::min(s.target_min, y);
        s.target_max = std::max(s.target_max, y);
    }
    return s;
}

std::vector<double> Scaler::apply_features(std::span<const double> x) const {
    if (x.size() != feature_min.size()) {
        throw std::invalid_argument("Scaler: feature length mismatch");
    }
    std::vector<double> out(x.size());
    for (std::size_t f = 0; f < x.size(); ++f) {
        const double range = feature_max[f] - feature_min[f];
        out[f] = range > 0.0 ? (x[f] - feature_min[f]) / range : 0.0;
    }
    return out;
}

double Scaler::apply_target(double y) const {
    const double range = target_max - target_min;
    return range > 0.0 ? (y - target_min) / range : 0.0;
}

double Scaler::invert_target(double y) const {
    return target_min + y * (target_max - target_min);
}

double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma) {
    if (x.size() != y.size()) throw std::invalid_argument("rbf_kernel: length mismatch");
    if (!(gamma > 0.0)) throw std::invalid_argument("rbf_kernel: gamma must be > 0");
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

namespace {

// Kernel matrix access: dense when small, on-demand rows otherwise.
class KernelCache {
public:
    KernelCache(const std::vector<std::vector<double>>& X, double gamma)
        : X_(X), gamma_(gamma), n_(X.size()) {
        if (n_ <= kDenseLimit) {
            dense_.assign(n_ * n_, 0.0);
            for (std::size_t i = 0; i < n_; ++i) {
                for (std::size_t j = 0; j <= i; ++j) {
                    const double v = rbf_kernel(X_[i], X_[j], gamma_);
                    dense_[i * n_ + j] = v;
                    dense_[j * n_ + i] = v;
                }
            }
        } else {
            rows_.assign(n_, {});
            stamp_.assign(n_, 0);
        }
    }

    const double* row(std::size_t i) {
        if (!dense_.empty()) return dense_.data() + i * n_;
        if (rows_[i].empty()) {
            evict_if_needed();
            rows_[i].resize(n_);
            for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = rbf_kernel(X_[i], X_[j], gamma_);
            ++cached_;
        }
        stamp_[i] = ++clock_;
        return rows_[i].data();
    }

private:
    static constexpr std::size_t kDenseLimit = 4096;
    static constexpr std::size_t kMaxRows = 1024;

    void evict_if_needed() {
        if (cached_ < kMaxRows) return;
        std::size_t oldest = 0;
        std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
        for (std::size_t i = 0; i < n_; ++i) {
            if (!rows_[i].empty() && stamp_[i] < best) {
                best = stamp_[i];
                oldest = i;
            }
        }
        rows_[oldest].clear();
        rows_[oldest].shrink_to_fit();
        --cached_;
    }

    const std::vector<std::vector<double>>& X_;
    double gamma_;
    std::size_t n_;
    std::vector<double> dense_;
    std::vector<std::vector<double>> rows_;
    std::vector<std::uint64_t> stamp_;
    std::size_t cached_ = 0;
    std::uint64_t clock_ = 0;
};

}  // namespace

SvrModel train_svr(const std::vector<std::vector<double>>& scaled_inputs,
                   const std::vector<double>& scaled_targets, const SvrHyper& hyper,
                   double kkt_tolerance, std::size_t max_steps) {
    hyper.validate();
    const std::size_t n = scaled_inputs.size();
    if (n < 2) throw std::invalid_argument("train_svr: need at least 2 samples");
    if (scaled_targets.size() != n) throw std::invalid_argument("train_svr: X/Y size mismatch");

    // 2n-variable dual: index a < n is alpha_a (sign +1), a >= n is
    // alpha*_{a-n} (sign -1). z in [0, C]^{2n}, sum(sign_a z_a) = 0.
    //
    // Only the sample-space prediction F_s = sum_t beta_t K_st is maintained
    // incrementally; both signed KKT values derive from it,
    //   v(+, s) = y_s - eps - F_s,    v(-, s) = v(+, s) + 2 eps,
    // which halves the per-step update work versus a 2n gradient vector.
    const double C = hyper.C;
    const double eps = hyper.epsilon;
    const std::size_t total = 2 * n;
    std::vector<double> z(total, 0.0), F(n, 0.0);
    auto sign_of = [n](std::size_t a) { return a < n ? 1.0 : -1.0; };
    auto sample_of = [n](std::size_t a) { return a < n ? a : a - n; };

    KernelCache cache(scaled_inputs, hyper.gamma);

    std::size_t steps = 0;
    double gap = 0.0;
    constexpr double kTau = 1e-12;
    while (true) {
        // First index: maximal KKT violator among upward-movable variables;
        // ties resolve to the first candidate in sample order, plus side
        // before minus side. `low` only feeds the stopping gap.
        long best_i = -1;
        double up = -std::numeric_limits<double>::infinity();
        double low = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < n; ++s) {
            const double vp = scaled_targets[s] - eps - F[s];
            const double vm = vp + 2.0 * eps;
            const double zp = z[s], zm = z[s + n];
            if (zp < C && vp > up) {
                up = vp;
                best_i = static_cast<long>(s);
            }
            if (zm > 0.0 && vm > up) {
                up = vm;
                best_i = static_cast<long>(s + n);
            }
            if (zp > 0.0 && vp < low) low = vp;
            if (zm < C && vm < low) low = vm;
        }
        gap = up - low;
        if (best_i < 0 || !std::isfinite(gap) || gap < kkt_tolerance) break;
        if (steps >= max_steps) {
            std::ostringstream msg;
            msg << "train_svr: no convergence after " << max_steps << " steps, gap " << gap;
            throw std::runtime_error(msg.str());
        }
        ++steps;

        const std::size_t i = static_cast<std::size_t>(best_i);
        const double yi = sign_of(i);
        const std::size_t si = sample_of(i);
        const double* Ki = cache.row(si);
        const double Kii = Ki[si];

        // Second index: largest second-order objective gain among
        // downward-movable variables that violate against i. The RBF
        // diagonal is 1, so curvature = Kii + 1 - 2 K_ij.
        long best_j = -1;
        double best_gain = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < n; ++s) {
            const double vp = scaled_targets[s] - eps - F[s];
            double q = Kii + 1.0 - 2.0 * Ki[s];
            if (q <= 0.0) q = kTau;
            if (z[s] > 0.0) {
                const double violation = up - vp;
                if (violation > 0.0) {
                    const double gain = violation * violation / q;
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_j = static_cast<long>(s);
                    }
                }
            }
            if (z[s + n] < C) {
                const double violation = up - (vp + 2.0 * eps);
                if (violation > 0.0) {
                    const double gain = violation * violation / q;
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_j = static_cast<long>(s + n);
                    }
                }
            }
        }
        if (best_j < 0) break;

        const std::size_t j = static_cast<std::size_t>(best_j);
        const double yj = sign_of(j);
        const std::size_t sj = sample_of(j);
        const double Kjj = cache.row(sj)[sj], Kij = Ki[sj];

        const double vi = scaled_targets[si] - eps - F[si] + (yi < 0.0 ? 2.0 * eps : 0.0);
        const double vj = scaled_targets[sj] - eps - F[sj] + (yj < 0.0 ? 2.0 * eps : 0.0);
        const double grad_i = -yi * vi, grad_j = -yj * vj;

        const double old_zi = z[i], old_zj = z[j];
        // In both branches the effective curvature is Kii + Kjj - 2 Kij >= 0.
        double quad = Kii + Kjj - 2.0 * Kij;
        if (quad <= 0.0) quad = kTau;
        if (yi != yj) {
            const double delta = (-grad_i - grad_j) / quad;
            const double diff = z[i] - z[j];
            z[i] += delta;
            z[j] += delta;
            if (diff > 0.0 && z[j] < 0.0) {
                z[j] = 0.0;
                z[i] = diff;
            } else if (diff <= 0.0 && z[i] < 0.0) {
                z[i] = 0.0;
                z[j] = -diff;
            }
            if (diff > 0.0 && z[i] > C) {
                z[i] = C;
                z[j] = C - diff;
            } else if (diff <= 0.0 && z[j] > C) {
                z[j] = C;
                z[i] = C + diff;
            }
        } else {
            const double delta = (grad_i - grad_j) / quad;
            const double sum = z[i] + z[j];
            z[i] -= delta;
            z[j] += delta;
            if (sum > C) {
                if (z[i] > C) {
                    z[i] = C;
                    z[j] = sum - C;
                } else if (z[j] > C) {
                    z[j] = C;
                    z[i] = sum - C;
                }
            } else {
                if (z[j] < 0.0) {
                    z[j] = 0.0;
                    z[i] = sum;
                } else if (z[i] < 0.0) {
                    z[i] = 0.0;
                    z[j] = sum;
                }
            }
        }

        const double di = yi * (z[i] - old_zi), dj = yj * (z[j] - old_zj);
        if (di != 0.0 || dj != 0.0) {
            const double* Kj = cache.row(sj);
            for (std::size_t s = 0; s < n; ++s) F[s] += Ki[s] * di + Kj[s] * dj;
        }
    }

    // beta_s = alpha_s - alpha*_s; KKT bias = -sign * grad at any free
    // variable, averaged; fall back to the gap midpoint when none is free.
    std::vector<double> beta(n);
    for (std::size_t s = 0; s < n; ++s) beta[s] = z[s] - z[s + n];

    double bias_sum = 0.0;
    std::size_t bias_count = 0;
    for (std::size_t s = 0; s < n; ++s) {
        const double vp = scaled_targets[s] - eps - F[s];
        if (z[s] > 0.0 && z[s] < C) {
            bias_sum += vp;
            ++bias_count;
        }
        if (z[s + n] > 0.0 && z[s + n] < C) {
            bias_sum += vp + 2.0 * eps;
            ++bias_count;
        }
    }
    double bias;
    if (bias_count > 0) {
        bias = bias_sum / static_cast<double>(bias_count);
    } else {
        double up = -std::numeric_limits<double>::infinity();
        double low = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < n; ++s) {
            const double vp = scaled_targets[s] - eps - F[s];
            const double vm = vp + 2.0 * eps;
            if (z[s] < C) up = std::max(up, vp);
            if (z[s + n] > 0.0) up = std::max(up, vm);
            if (z[s] > 0.0) low = std::min(low, vp);
            if (z[s + n] < C) low = std::min(low, vm);
        }
        bias = 0.5 * (up + low);
        if (!std::isfinite(bias)) bias = 0.0;
    }

    SvrModel model;
    model.hyper = hyper;
    model.bias = bias;
    model.iterations = steps;
    model.final_gap = gap;
    model.scaler.feature_min.assign(scaled_inputs[0].size(), 0.0);
    model.scaler.feature_max.assign(scaled_inputs[0].size(), 1.0);
    for (std::size_t s = 0; s < n; ++s) {
        if (std::abs(beta[s]) > 1e-12) {
            model.support_vectors.push_back(scaled_inputs[s]);
            model.dual_coefficients.push_back(beta[s]);
        }
    }
    return model;
}

SvrModel train_svr_on_windows(const WindowSet& windows, const SvrHyper& hyper,
                              double kkt_tolerance, std::size_t max_steps) {
    const Scaler scaler = Scaler::fit(windows);
    std::vector<std::vector<double>> X;
    std::vector<double> y;
    X.reserve(windows.size());
    y.reserve(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i) {
        X.push_back(scaler.apply_features(windows.inputs[i]));
        y.push_back(scaler.apply_target(windows.targets[i]));
    }
    SvrModel model = train_svr(X, y, hyper, kkt_tolerance, max_steps);
    model.scaler = scaler;
    return model;
}

double predict(const SvrModel& model, std::span<const double> x) {
    const std::vector<double> xs = model.scaler.apply_features(x);
    double sum = model.bias;
    for (std::size_t s = 0; s < model.support_vectors.size(); ++s) {
        sum += model.dual_coefficients[s] * rbf_kernel(model.support_vectors[s], xs,
                                                       model.hyper.gamma);
    }
    return model.scaler.invert_target(sum);
}

void save_svr(const SvrModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    const auto d = csv::format_double;
    out << "svrmodel v1\n";
    out << "features " << model.feature_width() << "\n";
    out << "feature_min";
    for (double v : model.scaler.feature_min) out << ' ' << d(v);
    out << "\nfeature_max";
    for (double v : model.scaler.feature_max) out << ' ' << d(v);
    out << "\ntarget_range " << d(model.scaler.target_min) << ' ' << d(model.scaler.target_max);
    out << "\nhyper " << d(model.hyper.C) << ' ' << d(model.hyper.epsilon) << ' '
        << d(model.hyper.gamma);
    out << "\nbias " << d(model.bias);
    out << "\ndiagnostics " << model.iterations << ' ' << d(model.final_gap);
    out << "\nsupport_vectors " << model.support_vectors.size() << "\n";
    for (std::size_t s = 0; s < model.support_vectors.size(); ++s) {
        out << d(model.dual_coefficients[s]);
        for (double v : model.support_vectors[s]) out << ' ' << d(v);
        out << "\n";
    }
}

SvrModel load_svr(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string tag, version;
    in >> tag >> version;
    if (tag != "svrmodel" || version != "v1") {
        throw std::runtime_error(path + ": not an svrmodel v1 file");
    }
    SvrModel model;
    std::size_t width = 0, nsv = 0;
    in >> tag >> width;
    model.scaler.feature_min.resize(width);
    model.scaler.feature_max.resize(width);
    in >> tag;
    for (double& v : model.scaler.feature_min) in >> v;
    in >> tag;
    for (double& v : model.scaler.feature_max) in >> v;
    in >> tag >> model.scaler.target_min >> model.scaler.target_max;
    in >> tag >> model.hyper.C >> model.hyper.epsilon >> model.hyper.gamma;
    in >> tag >> model.bias;
    in >> tag >> model.iterations >> model.final_gap;
    in >> tag >> nsv;
    model.support_vectors.assign(nsv, std::vector<double>(width));
    model.dual_coefficients.assign(nsv, 0.0);
    for (std::size_t s = 0; s < nsv; ++s) {
        in >> model.dual_coefficients[s];
        for (double& v : model.support_vectors[s]) in >> v;
    }
    if (!in) throw std::runtime_error(path + ": truncated svrmodel file");
    return model;
}

}  // namespace peakcast
