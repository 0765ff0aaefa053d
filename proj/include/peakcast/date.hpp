#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace peakcast {

// Calendar day. Stored as civil y/m/d; arithmetic goes through the
// proleptic-Gregorian serial day number (days since 1970-01-01).
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    static Date from_serial(std::int64_t days);
    std::int64_t serial() const;

    Date next() const { return from_serial(serial() + 1); }

    // "YYYY-MM-DD"
    std::string to_string() const;

    // Accepts "YYYY-MM-DD" and "YYYY/MM/DD".
    static Date parse(const std::string& text);
};

// Half-hourly settlement instant: date plus minute-of-day.
struct Timestamp {
    Date date;
    int minute_of_day = 0;  // 0..1439

    auto operator<=>(const Timestamp&) const = default;

    std::string to_string() const;

    // "YYYY/MM/DD HH:MM:SS" or "YYYY-MM-DD HH:MM:SS"
    static Timestamp parse(const std::string& text);
};

}  // namespace peakcast
