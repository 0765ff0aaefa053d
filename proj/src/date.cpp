#include "peakcast/date.hpp"

#include <cstdio>

namespace peakcast {

namespace {

// Howard Hinnant's civil-days algorithms.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yr + (m <= 2));
}

}  // namespace

Date Date::from_serial(std::int64_t days) {
    Date out;
    civil_from_days(days, out.year, out.month, out.day);
    return out;
}

std::int64_t Date::serial() const { return days_from_civil(year, month, day); }

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

Date Date::parse(const std::string& text) {
    int y = 0, m = 0, d = 0;
    if (std::sscanf(text.c_str(), "%d-%d-%d", &y, &m, &d) != 3 &&
        std::sscanf(text.c_str(), "%d/%d/%d", &y, &m, &d) != 3) {
        throw std::invalid_argument("unparseable date: '" + text + "'");
    }
    if (m < 1 || m > 12 || d < 1 || d > 31) {
        throw std::invalid_argument("date out of range: '" + text + "'");
    }
    return Date{y, m, d};
}

std::string Timestamp::to_string() const {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%s %02d:%02d:00", date.to_string().c_str(),
                  minute_of_day / 60, minute_of_day % 60);
    return buf;
}

Timestamp Timestamp::parse(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    int n = std::sscanf(text.c_str(), "%d/%d/%d %d:%d:%d", &y, &mo, &d, &h, &mi, &s);
    if (n < 5) n = std::sscanf(text.c_str(), "%d-%d-%d %d:%d:%d", &y, &mo, &d, &h, &mi, &s);
    if (n < 5) throw std::invalid_argument("unparseable timestamp: '" + text + "'");
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59) {
        throw std::invalid_argument("timestamp out of range: '" + text + "'");
    }
    return Timestamp{Date{y, mo, d}, h * 60 + mi};
}

}  // namespace peakcast
