#pragma once

#include <string>
#include <vector>

namespace peakcast::svg {

struct LineSeries {
    std::string name;
    std::vector<double> values;  // plotted against index 0..n-1
};

// Minimal static line chart: axes with min/max tick labels, one polyline per
// series, and a legend. Throws on empty input or unwritable path.
void write_line_chart(const std::string& path, const std::string& title,
                      const std::vector<LineSeries>& series);

}  // namespace peakcast::svg
