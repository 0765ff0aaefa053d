#pragma once

#include <cstddef>
#include <vector>

#include "peakcast/series.hpp"

namespace peakcast {

// Supervised pairs built from a channel matrix: the input for source index i
// is the last d days of every channel, most recent day first,
//   [x_i^1 .. x_i^m, x_{i-1}^1 .. x_{i-1}^m, ..., x_{i-d+1}^1 .. x_{i-d+1}^m]
// and the target is channel `target_channel` at i+1. Count is L - d.
struct WindowSet {
    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;
    std::size_t d = 0;
    std::size_t target_channel = 0;
    // source_index[j] = i, the most recent day feeding window j; the target
    // lives at i+1 in the source matrix.
    std::vector<std::size_t> source_index;

    std::size_t size() const { return inputs.size(); }
    std::size_t feature_width() const { return inputs.empty() ? 0 : inputs[0].size(); }

    // Chronological head/tail split, used for PSO holdout fitness.
    std::pair<WindowSet, WindowSet> split(std::size_t head_count) const;
};

WindowSet build_windows(const ChannelMatrix& data, std::size_t d, std::size_t target_channel);
WindowSet build_windows(const MultiSeries& series, std::size_t d, std::size_t target_channel = 0);

}  // namespace peakcast
