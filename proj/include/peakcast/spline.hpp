#pragma once

#include <vector>

namespace peakcast {

// Natural cubic spline through (x_i, y_i) with strictly increasing x.
// Degenerates to a line for 2 knots and a constant for 1.
class CubicSpline {
public:
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double t) const;

    // Evaluate at t = 0, 1, ..., length-1 into out (resized). Walks the knot
    // intervals forward instead of binary-searching per point, which is the
    // hot path when splining envelopes over a whole series.
    void sample_integers(std::size_t length, std::vector<double>& out) const;

    std::size_t knot_count() const { return x_.size(); }

private:
    std::vector<double> x_, y_;
    std::vector<double> b_, c_, d_;  // piecewise coefficients
};

}  // namespace peakcast
