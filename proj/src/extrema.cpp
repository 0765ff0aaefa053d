#include "peakcast/extrema.hpp"

#include <stdexcept>

namespace peakcast {

ExtremaResult find_extrema(std::span<const double> series) {
    if (series.size() < 3) throw std::invalid_argument("find_extrema: need at least 3 samples");

    // Compress into runs of equal values; a run flanked by lower (higher)
    // runs is a maximum (minimum) at its midpoint.
    struct Run {
        std::size_t start, end;  // inclusive
        double value;
    };
    std::vector<Run> runs;
    runs.push_back({0, 0, series[0]});
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (series[i] == runs.back().value) {
            runs.back().end = i;
        } else {
            runs.push_back({i, i, series[i]});
        }
    }

    ExtremaResult out;
    for (std::size_t k = 1; k + 1 < runs.size(); ++k) {
        const std::size_t mid = (runs[k].start + runs[k].end) / 2;
        if (runs[k].value > runs[k - 1].value && runs[k].value > runs[k + 1].value) {
            out.maxima.push_back(mid);
        } else if (runs[k].value < runs[k - 1].value && runs[k].value < runs[k + 1].value) {
            out.minima.push_back(mid);
        }
    }
    return out;
}

std::size_t count_zero_crossings(std::span<const double> series) {
    std::size_t count = 0;
    int prev = 0;
    for (double v : series) {
        const int sg = (v > 0.0) - (v < 0.0);
        if (sg == 0) continue;
        if (prev != 0 && sg != prev) ++count;
        prev = sg;
    }
    return count;
}

}  // namespace peakcast
