#pragma once

#include <string>
#include <vector>

#include "peakcast/series.hpp"

namespace peakcast {

// One half-hourly settlement row from the aggregated demand CSV.
struct RawDemandRow {
    std::string region;
    Timestamp settlement;
    double total_demand = 0.0;  // MW
};

struct RawTempRow {
    Date date;
    double mean_temperature = 0.0;  // degC
};

struct DailyDemand {
    Date date;
    double peak = 0.0;
    double valley = 0.0;
    double mean = 0.0;
};

struct IngestReport {
    std::size_t days_emitted = 0;
    std::size_t days_with_missing_intervals = 0;
    std::size_t interpolated_intervals = 0;  // gap days filled during the temperature join
    std::size_t dropped_days = 0;
    std::vector<std::string> warnings;
};

// Demand CSV columns (case-insensitive header): REGION,
// SETTLEMENTDATE (YYYY/MM/DD HH:MM:SS), TOTALDEMAND; extra columns ignored.
// Rows are filtered to `region`, sorted by timestamp; duplicates are an error.
std::vector<RawDemandRow> parse_demand_csv(const std::string& path, const std::string& region);

// Per calendar day: peak = max, valley = min, mean = average of available
// intervals. Days with fewer than 40 of 48 intervals are dropped; days with
// 40..47 are kept and counted as missing-interval days.
std::pair<std::vector<DailyDemand>, IngestReport> aggregate_daily(
    const std::vector<RawDemandRow>& rows);

// Temperature CSV columns: DATE (YYYY-MM-DD), MEAN_TEMP.
std::vector<RawTempRow> parse_temperature_csv(const std::string& path);

// Inner join on date; interior single-day gaps are filled by linear
// interpolation of all four channels, gaps of 2+ days are an error.
MultiSeries join_temperature(const std::vector<DailyDemand>& daily,
                             const std::vector<RawTempRow>& temps, IngestReport& report);

}  // namespace peakcast
