#include "peakcast/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "peakcast/csv.hpp"

namespace peakcast {

std::vector<RawDemandRow> parse_demand_csv(const std::string& path, const std::string& region) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("demand file not found: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty demand CSV: " + path);

    const auto header = csv::split_line(line);
    long col_region = -1, col_date = -1, col_demand = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name = csv::to_lower(header[i]);
        if (name == "region") col_region = static_cast<long>(i);
        if (name == "settlementdate") col_date = static_cast<long>(i);
        if (name == "totaldemand") col_demand = static_cast<long>(i);
    }
    if (col_region < 0 || col_date < 0 || col_demand < 0) {
        throw std::runtime_error(path + ": missing REGION/SETTLEMENTDATE/TOTALDEMAND column");
    }

    std::vector<RawDemandRow> rows;
    bool region_seen = false;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = csv::split_line(line);
        const std::size_t need =
            static_cast<std::size_t>(std::max({col_region, col_date, col_demand})) + 1;
        if (cells.size() < need) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": too few columns");
        }
        if (cells[col_region] != region) continue;
        region_seen = true;
        RawDemandRow row;
        row.region = region;
        try {
            row.settlement = Timestamp::parse(cells[col_date]);
            row.total_demand = std::stod(cells[col_demand]);
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (!(row.total_demand >= 0.0)) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": negative demand");
        }
        if (row.settlement.minute_of_day % 30 != 0) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": timestamp not on a 30-minute boundary");
        }
        rows.push_back(std::move(row));
    }
    if (!region_seen) throw std::runtime_error(path + ": no rows for region '" + region + "'");

    std::stable_sort(rows.begin(), rows.end(), [](const RawDemandRow& a, const RawDemandRow& b) {
        return a.settlement < b.settlement;
    });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].settlement == rows[i - 1].settlement) {
            throw std::runtime_error(path + ": duplicate timestamp " +
                                     rows[i].settlement.to_string());
        }
    }
    return rows;
}

std::pair<std::vector<DailyDemand>, IngestReport> aggregate_daily(
    const std::vector<RawDemandRow>& rows) {
    constexpr std::size_t kFullDay = 48;
    constexpr std::size_t kMinIntervals = 40;

    std::map<std::int64_t, std::vector<double>> by_day;
    for (const RawDemandRow& r : rows) by_day[r.settlement.date.serial()].push_back(r.total_demand);

    std::vector<DailyDemand> out;
    IngestReport report;
    for (const auto& [serial, values] : by_day) {
        if (values.size() < kMinIntervals) {
            ++report.dropped_days;
            continue;
        }
        DailyDemand day;
        day.date = Date::from_serial(serial);
        day.peak = values[0];
        day.valley = values[0];
        double sum = 0.0;
        for (double v : values) {
            day.peak = std::max(day.peak, v);
            day.valley = std::min(day.valley, v);
            sum += v;
        }
        day.mean = sum / static_cast<double>(values.size());
        if (values.size() < kFullDay) ++report.days_with_missing_intervals;
        out.push_back(day);
    }
    if (out.empty()) throw std::runtime_error("aggregate_daily: no complete days");
    report.days_emitted = out.size();
    return {out, report};
}

std::vector<RawTempRow> parse_temperature_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("temperature file not found: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty temperature CSV: " + path);
    const auto header = csv::split_line(line);
    long col_date = -1, col_temp = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name = csv::to_lower(header[i]);
        if (name == "date") col_date = static_cast<long>(i);
        if (name == "mean_temp") col_temp = static_cast<long>(i);
    }
    if (col_date < 0 || col_temp < 0) {
        throw std::runtime_error(path + ": missing DATE/MEAN_TEMP column");
    }
    std::vector<RawTempRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = csv::split_line(line);
        if (cells.size() <= static_cast<std::size_t>(std::max(col_date, col_temp))) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": too few columns");
        }
        RawTempRow row;
        try {
            row.date = Date::parse(cells[col_date]);
            row.mean_temperature = std::stod(cells[col_temp]);
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (!std::isfinite(row.mean_temperature)) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": non-finite temperature");
        }
        rows.push_back(row);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const RawTempRow& a, const RawTempRow& b) { return a.date < b.date; });
    return rows;
}

MultiSeries join_temperature(const std::vector<DailyDemand>& daily,
                             const std::vector<RawTempRow>& temps, IngestReport& report) {
    std::map<std::int64_t, double> temp_by_day;
    for (const RawTempRow& t : temps) {
        temp_by_day[t.date.serial()] = t.mean_temperature;
        if (t.mean_temperature < -20.0 || t.mean_temperature > 60.0) {
            report.warnings.push_back("implausible temperature " +
                                      std::to_string(t.mean_temperature) + " on " +
                                      t.date.to_string());
        }
    }

    std::vector<DailyRecord> joined;
    for (const DailyDemand& d : daily) {
        auto it = temp_by_day.find(d.date.serial());
        if (it == temp_by_day.end()) continue;
        joined.push_back(DailyRecord{d.date, d.peak, d.valley, d.mean, it->second});
    }
    if (joined.empty()) throw std::runtime_error("join_temperature: no common dates");

    // Fill interior single-day gaps; anything longer is a hard error.
    std::vector<DailyRecord> out;
    out.push_back(joined[0]);
    for (std::size_t i = 1; i < joined.size(); ++i) {
        const std::int64_t gap = joined[i].date.serial() - joined[i - 1].date.serial() - 1;
        if (gap >= 2) {
            throw std::runtime_error("join_temperature: gap of " + std::to_string(gap) +
                                     " days after " + joined[i - 1].date.to_string());
        }
        if (gap == 1) {
            const DailyRecord& a = joined[i - 1];
            const DailyRecord& b = joined[i];
            DailyRecord mid;
            mid.date = a.date.next();
            mid.peak = 0.5 * (a.peak + b.peak);
            mid.valley = 0.5 * (a.valley + b.valley);
            mid.mean = 0.5 * (a.mean + b.mean);
            mid.temperature = 0.5 * (a.temperature + b.temperature);
            out.push_back(mid);
            ++report.interpolated_intervals;
        }
        out.push_back(joined[i]);
    }
    report.days_emitted = out.size();
    return MultiSeries(std::move(out));
}

}  // namespace peakcast
