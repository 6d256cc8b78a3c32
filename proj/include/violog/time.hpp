#pragma once

#include <compare>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "violog/common.hpp"

namespace violog {

// Minute within a day, [0, 1440).
struct MinuteOfDay {
    int minutes = 0;

    constexpr int hour() const { return minutes / 60; }
    constexpr int minute() const { return minutes % 60; }
    auto operator<=>(const MinuteOfDay&) const = default;
};

struct Date {
    int year = 0;
    int month = 0; // 1..12
    int day = 0;   // 1..31

    auto operator<=>(const Date&) const = default;
};

// Local date-time at minute precision. No time zone handling: all inputs are
// already local clock readings.
struct DateTime {
    Date date;
    MinuteOfDay time;

    auto operator<=>(const DateTime&) const = default;
};

inline bool is_leap_year(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

inline int days_in_month(int year, int month) {
    static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap_year(year)) return 29;
    return lengths[month - 1];
}

inline bool valid_date(const Date& d) {
    return d.month >= 1 && d.month <= 12 && d.day >= 1 &&
           d.day <= days_in_month(d.year, d.month);
}

// Days since 1970-01-01 (civil calendar, Howard Hinnant's algorithm).
inline std::int64_t days_from_civil(const Date& d) {
    std::int64_t y = d.year;
    const int m = d.month;
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d.day - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

// 0 = Monday .. 6 = Sunday.
inline int weekday_mon0(const Date& d) {
    // 1970-01-01 was a Thursday.
    std::int64_t days = days_from_civil(d);
    return static_cast<int>(((days % 7) + 7 + 3) % 7);
}

inline const char* weekday_name(int mon0) {
    static const char* names[] = {"mon", "tue", "wed", "thu", "fri", "sat", "sun"};
    return names[mon0];
}

inline const char* month_name(int month1) {
    static const char* names[] = {"january", "february", "march",     "april",
                                  "may",     "june",     "july",      "august",
                                  "september", "october", "november", "december"};
    return names[month1 - 1];
}

// Accepts ISO "YYYY-MM-DD" and US "MM/DD/YYYY".
inline bool parse_date(std::string_view s, Date& out) {
    s = trim(s);
    auto num = [](std::string_view t, int& v) {
        long long x;
        if (!parse_long(t, x)) return false;
        v = static_cast<int>(x);
        return true;
    };
    Date d;
    if (s.size() >= 8 && s.find('-') != std::string_view::npos) {
        auto parts = split(s, '-');
        if (parts.size() != 3) return false;
        if (!num(parts[0], d.year) || !num(parts[1], d.month) || !num(parts[2], d.day)) return false;
    } else if (s.find('/') != std::string_view::npos) {
        auto parts = split(s, '/');
        if (parts.size() != 3) return false;
        if (!num(parts[0], d.month) || !num(parts[1], d.day) || !num(parts[2], d.year)) return false;
    } else {
        return false;
    }
    if (!valid_date(d)) return false;
    out = d;
    return true;
}

// Accepts "HH:MM" and "HH:MM:SS" (seconds discarded; minute precision).
inline bool parse_time(std::string_view s, MinuteOfDay& out) {
    auto parts = split(trim(s), ':');
    if (parts.size() != 2 && parts.size() != 3) return false;
    long long h, m;
    if (!parse_long(parts[0], h) || !parse_long(parts[1], m)) return false;
    if (parts.size() == 3) {
        long long sec;
        if (!parse_long(parts[2], sec) || sec < 0 || sec > 59) return false;
    }
    if (h < 0 || h > 23 || m < 0 || m > 59) return false;
    out = MinuteOfDay{static_cast<int>(h * 60 + m)};
    return true;
}

inline std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

inline std::string format_time(const MinuteOfDay& t) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d:%02d", t.hour(), t.minute());
    return buf;
}

} // namespace violog
