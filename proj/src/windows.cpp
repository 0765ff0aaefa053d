#include "peakcast/windows.hpp"

#include <stdexcept>

namespace peakcast {

std::pair<WindowSet, WindowSet> WindowSet::split(std::size_t head_count) const {
    if (head_count > size()) throw std::out_of_range("WindowSet::split");
    WindowSet head, tail;
    head.d = tail.d = d;
    head.target_channel = tail.target_channel = target_channel;
    head.inputs.assign(inputs.begin(), inputs.begin() + head_count);
    head.targets.assign(targets.begin(), targets.begin() + head_count);
    head.source_index.assign(source_index.begin(), source_index.begin() + head_count);
    tail.inputs.assign(inputs.begin() + head_count, inputs.end());
    tail.targets.assign(targets.begin() + head_count, targets.end());
    tail.source_index.assign(source_index.begin() + head_count, source_index.end());
    return {head, tail};
}

WindowSet build_windows(const ChannelMatrix& data, std::size_t d, std::size_t target_channel) {
    const std::size_t m = data.dim();
    const std::size_t length = data.length();
    if (d < 1) throw std::invalid_argument("build_windows: d must be >= 1");
    if (length <= d) throw std::invalid_argument("build_windows: series length must exceed d");
    if (target_channel >= m) throw std::invalid_argument("build_windows: bad target channel");

    WindowSet out;
    out.d = d;
    out.target_channel = target_channel;
    const std::size_t count = length - d;
    out.inputs.reserve(count);
    out.targets.reserve(count);
    out.source_index.reserve(count);
    for (std::size_t i = d - 1; i + 1 < length; ++i) {
        std::vector<double> feat;
        feat.reserve(m * d);
        for (std::size_t lag = 0; lag < d; ++lag) {
            for (std::size_t c = 0; c < m; ++c) feat.push_back(data.channels[c][i - lag]);
        }
        out.inputs.push_back(std::move(feat));
        out.targets.push_back(data.channels[target_channel][i + 1]);
        out.source_index.push_back(i);
    }
    return out;
}

WindowSet build_windows(const MultiSeries& series, std::size_t d, std::size_t target_channel) {
    return build_windows(series.channels(), d, target_channel);
}

}  // namespace peakcast
