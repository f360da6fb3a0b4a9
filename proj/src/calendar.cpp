#include "enscen/calendar.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace enscen {

namespace {

constexpr std::array<int, 12> kMonthDays = {31, 28, 31, 30, 31, 30,
                                            31, 31, 30, 31, 30, 31};

bool take_int(std::string_view& s, int max_digits, int& out) {
    int value = 0;
    int digits = 0;
    while (!s.empty() && digits < max_digits && std::isdigit(static_cast<unsigned char>(s.front()))) {
        value = value * 10 + (s.front() - '0');
        s.remove_prefix(1);
        ++digits;
    }
    if (digits == 0) return false;
    out = value;
    return true;
}

bool take_char(std::string_view& s, char c) {
    if (s.empty() || s.front() != c) return false;
    s.remove_prefix(1);
    return true;
}

}  // namespace

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    if (month == 2 && is_leap_year(year)) return 29;
    return kMonthDays[month - 1];
}

int days_in_year(int year) { return is_leap_year(year) ? 366 : 365; }

int day_of_year(int year, int month, int day) {
    int doy = day;
    for (int m = 1; m < month; ++m) doy += days_in_month(year, m);
    return doy;
}

int month_from_day_of_year(int year, int doy) {
    int m = 1;
    while (doy > days_in_month(year, m)) {
        doy -= days_in_month(year, m);
        ++m;
    }
    return m;
}

std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::int64_t minutes_since_epoch(const DateTime& dt) {
    return days_from_civil(dt.year, dt.month, dt.day) * 1440 + dt.hour * 60 + dt.minute;
}

double hour_of_day(const DateTime& dt) {
    return dt.hour + dt.minute / 60.0 + dt.second / 3600.0;
}

int quarter_of_day(const DateTime& dt) { return dt.hour * 4 + dt.minute / 15; }

std::optional<DateTime> parse_datetime(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.remove_suffix(1);
    if (text.empty()) return std::nullopt;

    DateTime dt;
    int a = 0, b = 0, c = 0;
    std::string_view s = text;
    if (!take_int(s, 4, a)) return std::nullopt;
    if (take_char(s, '-')) {
        // YYYY-MM-DD
        if (!take_int(s, 2, b) || !take_char(s, '-') || !take_int(s, 2, c)) return std::nullopt;
        dt.year = a;
        dt.month = b;
        dt.day = c;
    } else if (take_char(s, '/')) {
        // DD/MM/YYYY
        if (!take_int(s, 2, b) || !take_char(s, '/') || !take_int(s, 4, c)) return std::nullopt;
        dt.day = a;
        dt.month = b;
        dt.year = c;
    } else {
        return std::nullopt;
    }
    if (dt.month < 1 || dt.month > 12) return std::nullopt;
    if (dt.day < 1 || dt.day > days_in_month(dt.year, dt.month)) return std::nullopt;

    if (!s.empty()) {
        if (!(take_char(s, ' ') || take_char(s, 'T'))) return std::nullopt;
        if (!take_int(s, 2, dt.hour) || !take_char(s, ':') || !take_int(s, 2, dt.minute))
            return std::nullopt;
        if (take_char(s, ':')) {
            if (!take_int(s, 2, dt.second)) return std::nullopt;
            if (take_char(s, '.')) {
                while (!s.empty() && std::isdigit(static_cast<unsigned char>(s.front())))
                    s.remove_prefix(1);
            }
        }
        // zone suffix, if any, is dropped: the local component is the value
        if (!s.empty() && (s.front() == '+' || s.front() == '-' || s.front() == 'Z'))
            s = {};
        if (!s.empty()) return std::nullopt;
        if (dt.hour > 23 || dt.minute > 59 || dt.second > 59) return std::nullopt;
    }
    return dt;
}

std::string format_datetime(const DateTime& dt) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d %02d:%02d:%02d", dt.year, dt.month, dt.day,
                  dt.hour, dt.minute, dt.second);
    return buf;
}

}  // namespace enscen
