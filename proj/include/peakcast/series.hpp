#pragma once

#include <array>
#include <string>
#include <vector>

#include "peakcast/date.hpp"

namespace peakcast {

// One day of the four-channel history: loads in MW, temperature in degC.
struct DailyRecord {
    Date date;
    double peak = 0.0;
    double valley = 0.0;
    double mean = 0.0;
    double temperature = 0.0;
};

// Dense m x L matrix of channel values. Decomposition components and raw
// series share this layout; channel 0 is always the forecast target (peak).
struct ChannelMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> channels;  // channels[c][t]

    std::size_t dim() const { return channels.size(); }
    std::size_t length() const { return channels.empty() ? 0 : channels[0].size(); }
};

// Strictly consecutive daily 4-channel series. Immutable after construction;
// the constructor enforces date continuity, finiteness and valley<=mean<=peak.
class MultiSeries {
public:
    MultiSeries() = default;
    explicit MultiSeries(std::vector<DailyRecord> records);

    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    const DailyRecord& operator[](std::size_t i) const { return records_[i]; }
    const std::vector<DailyRecord>& records() const { return records_; }

    Date start_date() const { return records_.front().date; }
    Date end_date() const { return records_.back().date; }

    static constexpr std::size_t kChannels = 4;
    static const std::array<std::string, kChannels>& channel_labels();

    // m x L view of the series, rows ordered peak, valley, mean, temperature.
    ChannelMatrix channels() const;

    MultiSeries slice(std::size_t begin, std::size_t count) const;
    MultiSeries concat(const MultiSeries& tail) const;

private:
    std::vector<DailyRecord> records_;
};

// Chronological train/test boundary. boundary = floor(train_fraction * L)
// unless an explicit boundary override is given.
struct SplitSpec {
    double train_fraction = 2.0 / 3.0;
    // When >= 0 this exact train size is used instead of the fraction.
    long boundary_override = -1;

    std::size_t boundary(std::size_t length) const;
};

std::pair<MultiSeries, MultiSeries> split_train_test(const MultiSeries& series,
                                                     const SplitSpec& spec);

}  // namespace peakcast
