#include "peakcast/spline.hpp"

#include <algorithm>
#include <stdexcept>

namespace peakcast {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n == 0 || n != y_.size()) throw std::invalid_argument("CubicSpline: bad knot arrays");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(x_[i] > x_[i - 1])) {
            throw std::invalid_argument("CubicSpline: knots not strictly increasing");
        }
    }
    b_.assign(n, 0.0);
    c_.assign(n, 0.0);
    d_.assign(n, 0.0);
    if (n == 1) return;
    if (n == 2) {
        b_[0] = b_[1] = (y_[1] - y_[0]) / (x_[1] - x_[0]);
        return;
    }

    // Tridiagonal solve for second-derivative-based coefficients c_,
    // natural boundary conditions c_0 = c_{n-1} = 0.
    std::vector<double> h(n - 1), alpha(n, 0.0), l(n), mu(n), z(n);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        alpha[i] = 3.0 * (y_[i + 1] - y_[i]) / h[i] - 3.0 * (y_[i] - y_[i - 1]) / h[i - 1];
    }
    l[0] = 1.0;
    mu[0] = 0.0;
    z[0] = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        l[i] = 2.0 * (x_[i + 1] - x_[i - 1]) - h[i - 1] * mu[i - 1];
        mu[i] = h[i] / l[i];
        z[i] = (alpha[i] - h[i - 1] * z[i - 1]) / l[i];
    }
    l[n - 1] = 1.0;
    z[n - 1] = 0.0;
    c_[n - 1] = 0.0;
    for (std::size_t j = n - 1; j-- > 0;) {
        c_[j] = z[j] - mu[j] * c_[j + 1];
        b_[j] = (y_[j + 1] - y_[j]) / h[j] - h[j] * (c_[j + 1] + 2.0 * c_[j]) / 3.0;
        d_[j] = (c_[j + 1] - c_[j]) / (3.0 * h[j]);
    }
}

double CubicSpline::operator()(double t) const {
    const std::size_t n = x_.size();
    if (n == 1) return y_[0];
    if (n == 2) return y_[0] + b_[0] * (t - x_[0]);
    // Locate the containing interval; clamp to first/last for extrapolation.
    std::size_t j;
    if (t <= x_[0]) {
        j = 0;
    } else if (t >= x_[n - 1]) {
        j = n - 2;
    } else {
        j = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), t) - x_.begin()) - 1;
    }
    const double dx = t - x_[j];
    return y_[j] + dx * (b_[j] + dx * (c_[j] + dx * d_[j]));
}

void CubicSpline::sample_integers(std::size_t length, std::vector<double>& out) const {
    out.resize(length);
    const std::size_t n = x_.size();
    if (n == 1) {
        std::fill(out.begin(), out.end(), y_[0]);
        return;
    }
    if (n == 2) {
        for (std::size_t t = 0; t < length; ++t) {
            out[t] = y_[0] + b_[0] * (static_cast<double>(t) - x_[0]);
        }
        return;
    }
    std::size_t j = 0;
    for (std::size_t t = 0; t < length; ++t) {
        const double tt = static_cast<double>(t);
        while (j + 2 < n && x_[j + 1] <= tt) ++j;
        const double dx = tt - x_[j];
        out[t] = y_[j] + dx * (b_[j] + dx * (c_[j] + dx * d_[j]));
    }
}

}  // namespace peakcast
