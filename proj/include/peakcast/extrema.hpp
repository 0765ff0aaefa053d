#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace peakcast {

struct ExtremaResult {
    std::vector<std::size_t> maxima;
    std::vector<std::size_t> minima;
};

// Strict interior local extrema by sign change of the first difference.
// Interior plateaus contribute their midpoint index; endpoints never count.
ExtremaResult find_extrema(std::span<const double> series);

std::size_t count_zero_crossings(std::span<const double> series);

}  // namespace peakcast
