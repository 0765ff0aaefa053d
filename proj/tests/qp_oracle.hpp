// Brute-force reference solver for the epsilon-insensitive SVR dual,
//
//   maximize  W(b) = -1/2 b'Kb - eps * sum|b_i| + y'b
//   s.t.      sum b_i = 0,  -C <= b_i <= C
//
// used as an independent oracle by the unit tests and the acceptance suite.
// Every variable is assigned one of five states {-C, +C, 0, free>0, free<0};
// for each assignment the free block is solved from the stationarity system
// (with a multiplier for the sum constraint) by Gaussian elimination, and the
// best feasible candidate over all 5^n assignments is the global optimum of
// the concave objective. Practical up to n ~ 8.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "peakcast/svr.hpp"

namespace qp_oracle {

struct OracleResult {
    std::vector<double> beta;
    double objective = -std::numeric_limits<double>::infinity();
    double bias = 0.0;
    bool has_free = false;
};

inline bool solve_linear(std::vector<std::vector<double>> a, std::vector<double>& rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < 1e-12) return false;
        std::swap(a[col], a[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    for (std::size_t i = 0; i < n; ++i) rhs[i] /= a[i][i];
    return true;
}

inline double dual_objective(const std::vector<std::vector<double>>& K,
                             const std::vector<double>& y, double eps,
                             const std::vector<double>& beta) {
    const std::size_t n = y.size();
    double quad = 0.0, l1 = 0.0, lin = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) quad += beta[i] * K[i][j] * beta[j];
        l1 += std::abs(beta[i]);
        lin += y[i] * beta[i];
    }
    return -0.5 * quad - eps * l1 + lin;
}

inline OracleResult brute_force_dual(const std::vector<std::vector<double>>& X,
                                     const std::vector<double>& y,
                                     const peakcast::SvrHyper& h) {
    const std::size_t n = X.size();
    std::vector<std::vector<double>> K(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            K[i][j] = peakcast::rbf_kernel(X[i], X[j], h.gamma);
        }
    }
    const double C = h.C, eps = h.epsilon;

    OracleResult best;
    std::size_t combos = 1;
    for (std::size_t i = 0; i < n; ++i) combos *= 5;
    std::vector<int> state(n);
    for (std::size_t code = 0; code < combos; ++code) {
        std::size_t rem = code;
        for (std::size_t i = 0; i < n; ++i) {
            state[i] = static_cast<int>(rem % 5);
            rem /= 5;
        }
        std::vector<double> beta(n, 0.0);
        std::vector<std::size_t> free_idx;
        double fixed_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (state[i] == 0) beta[i] = -C;
            else if (state[i] == 1) beta[i] = C;
            else if (state[i] == 2) beta[i] = 0.0;
            else free_idx.push_back(i);
            if (state[i] < 3) fixed_sum += beta[i];
        }
        const bool has_free = !free_idx.empty();
        if (has_free) {
            // Stationarity for free i: (K beta)_i - lambda = y_i - eps*s_i,
            // plus the sum constraint row.
            const std::size_t f = free_idx.size();
            std::vector<std::vector<double>> a(f + 1, std::vector<double>(f + 1, 0.0));
            std::vector<double> rhs(f + 1, 0.0);
            for (std::size_t r = 0; r < f; ++r) {
                const std::size_t i = free_idx[r];
                const double s = state[i] == 3 ? 1.0 : -1.0;
                for (std::size_t c = 0; c < f; ++c) a[r][c] = K[i][free_idx[c]];
                a[r][f] = -1.0;
                rhs[r] = y[i] - eps * s;
                for (std::size_t jj = 0; jj < n; ++jj) {
                    if (state[jj] < 3) rhs[r] -= K[i][jj] * beta[jj];
                }
            }
            for (std::size_t c = 0; c < f; ++c) a[f][c] = 1.0;
            rhs[f] = -fixed_sum;
            if (!solve_linear(a, rhs)) continue;
            for (std::size_t r = 0; r < f; ++r) beta[free_idx[r]] = rhs[r];
        } else if (std::abs(fixed_sum) > 1e-9) {
            continue;
        }

        bool feasible = true;
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (beta[i] < -C - 1e-9 || beta[i] > C + 1e-9) feasible = false;
            beta[i] = std::clamp(beta[i], -C, C);
            total += beta[i];
        }
        if (!feasible || std::abs(total) > 1e-8) continue;

        const double obj = dual_objective(K, y, eps, beta);
        if (obj > best.objective) {
            best.objective = obj;
            best.beta = beta;
        }
    }

    // Bias from KKT at a strictly interior variable of the optimal beta:
    // f(x_i) = y_i - eps * sign(beta_i), so b = y_i - eps*s - (K beta)_i.
    // (The assignment's multiplier is unreliable when a variable solved to
    // exactly zero inside a "free" block.)
    if (!best.beta.empty()) {
        double bias_sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double b = best.beta[i];
            if (std::abs(b) > 1e-7 && std::abs(b) < C - 1e-7) {
                double kb = 0.0;
                for (std::size_t j = 0; j < n; ++j) kb += K[i][j] * best.beta[j];
                bias_sum += y[i] - eps * (b > 0.0 ? 1.0 : -1.0) - kb;
                ++count;
            }
        }
        if (count > 0) {
            best.bias = bias_sum / static_cast<double>(count);
            best.has_free = true;
        }
    }
    return best;
}

// Prediction straight from dual variables (no scaling involved).
inline double raw_predict(const std::vector<std::vector<double>>& sv,
                          const std::vector<double>& beta, double bias, double gamma,
                          const std::vector<double>& x) {
    double f = bias;
    for (std::size_t i = 0; i < sv.size(); ++i) {
        f += beta[i] * peakcast::rbf_kernel(sv[i], x, gamma);
    }
    return f;
}

}  // namespace qp_oracle
