#include "peakcast/csv.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace peakcast::csv {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::string to_lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_daily_csv(const std::string& path, const MultiSeries& series) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "date,peak,valley,mean,temperature\n";
    for (const DailyRecord& r : series.records()) {
        out << r.date.to_string() << ',' << format_double(r.peak) << ','
            << format_double(r.valley) << ',' << format_double(r.mean) << ','
            << format_double(r.temperature) << '\n';
    }
}

MultiSeries read_daily_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty daily CSV: " + path);
    std::vector<DailyRecord> records;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_line(line);
        if (cells.size() < 5) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 5 columns");
        }
        DailyRecord r;
        r.date = Date::parse(cells[0]);
        try {
            r.peak = std::stod(cells[1]);
            r.valley = std::stod(cells[2]);
            r.mean = std::stod(cells[3]);
            r.temperature = std::stod(cells[4]);
        } catch (const std::exception&) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed number");
        }
        records.push_back(r);
    }
    return MultiSeries(std::move(records));
}

}  // namespace peakcast::csv
