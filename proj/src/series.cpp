#include "peakcast/series.hpp"

#include <cmath>
#include <stdexcept>

namespace peakcast {

MultiSeries::MultiSeries(std::vector<DailyRecord> records) : records_(std::move(records)) {
    if (records_.empty()) throw std::invalid_argument("MultiSeries: empty record list");
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const DailyRecord& r = records_[i];
        if (!std::isfinite(r.peak) || !std::isfinite(r.valley) || !std::isfinite(r.mean) ||
            !std::isfinite(r.temperature)) {
            throw std::invalid_argument("MultiSeries: non-finite value at " + r.date.to_string());
        }
        if (!(r.valley <= r.mean && r.mean <= r.peak)) {
            throw std::invalid_argument("MultiSeries: valley <= mean <= peak violated at " +
                                        r.date.to_string());
        }
        if (i > 0 && records_[i].date.serial() != records_[i - 1].date.serial() + 1) {
            throw std::invalid_argument("MultiSeries: dates not consecutive at " +
                                        r.date.to_string());
        }
    }
}

const std::array<std::string, MultiSeries::kChannels>& MultiSeries::channel_labels() {
    static const std::array<std::string, kChannels> labels = {"peak", "valley", "mean",
                                                              "temperature"};
    return labels;
}

ChannelMatrix MultiSeries::channels() const {
    ChannelMatrix out;
    out.labels.assign(channel_labels().begin(), channel_labels().end());
    out.channels.assign(kChannels, std::vector<double>(records_.size()));
    for (std::size_t t = 0; t < records_.size(); ++t) {
        out.channels[0][t] = records_[t].peak;
        out.channels[1][t] = records_[t].valley;
        out.channels[2][t] = records_[t].mean;
        out.channels[3][t] = records_[t].temperature;
    }
    return out;
}

MultiSeries MultiSeries::slice(std::size_t begin, std::size_t count) const {
    if (begin + count > records_.size()) throw std::out_of_range("MultiSeries::slice");
    return MultiSeries(
        std::vector<DailyRecord>(records_.begin() + begin, records_.begin() + begin + count));
}

MultiSeries MultiSeries::concat(const MultiSeries& tail) const {
    std::vector<DailyRecord> all = records_;
    all.insert(all.end(), tail.records_.begin(), tail.records_.end());
    return MultiSeries(std::move(all));
}

std::size_t SplitSpec::boundary(std::size_t length) const {
    if (boundary_override >= 0) return static_cast<std::size_t>(boundary_override);
    return static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(length)));
}

std::pair<MultiSeries, MultiSeries> split_train_test(const MultiSeries& series,
                                                     const SplitSpec& spec) {
    if (series.size() < 2) throw std::invalid_argument("split_train_test: need at least 2 days");
    if (spec.boundary_override < 0 && (spec.train_fraction <= 0.0 || spec.train_fraction >= 1.0)) {
        throw std::invalid_argument("split_train_test: train_fraction must be in (0,1)");
    }
    const std::size_t b = spec.boundary(series.size());
    if (b == 0 || b >= series.size()) {
        throw std::invalid_argument("split_train_test: split leaves an empty side");
    }
    return {series.slice(0, b), series.slice(b, series.size() - b)};
}

}  // namespace peakcast
