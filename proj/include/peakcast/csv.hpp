#pragma once

#include <string>
#include <vector>

#include "peakcast/series.hpp"

namespace peakcast::csv {

// Splits one CSV line; no quoting support (none of the consumed formats use it).
std::vector<std::string> split_line(const std::string& line);

std::string to_lower(std::string s);

// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

// Canonical daily interchange file: header "date,peak,valley,mean,temperature".
void write_daily_csv(const std::string& path, const MultiSeries& series);
MultiSeries read_daily_csv(const std::string& path);

}  // namespace peakcast::csv
