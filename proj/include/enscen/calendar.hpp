#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace enscen {

/// Civil timestamp at minute-to-second resolution. No timezone logic: values
/// are kept exactly as published (the bundled dataset schemas are local
/// Belgian time); daylight-saving artifacts are handled downstream by
/// interval order.
struct DateTime {
    int year = 0;
    int month = 1;   // 1..12
    int day = 1;     // 1..31
    int hour = 0;    // 0..23
    int minute = 0;  // 0..59
    int second = 0;  // 0..59

    bool operator==(const DateTime&) const = default;
    auto operator<=>(const DateTime&) const = default;
};

bool is_leap_year(int year);
int days_in_month(int year, int month);
int days_in_year(int year);

/// 1-based ordinal day within the year.
int day_of_year(int year, int month, int day);
int month_from_day_of_year(int year, int doy);

/// Days since 1970-01-01 for arbitrary civil dates (proleptic Gregorian).
std::int64_t days_from_civil(int year, int month, int day);

/// Minutes since 1970-01-01 00:00; seconds are truncated.
std::int64_t minutes_since_epoch(const DateTime& dt);

/// Fractional hour of day in [0, 24).
double hour_of_day(const DateTime& dt);

/// Quarter-hour slot of the day, 0..95.
int quarter_of_day(const DateTime& dt);

/// Accepts "YYYY-MM-DD HH:MM[:SS]" (also 'T' separator) and
/// "DD/MM/YYYY HH:MM[:SS]". A missing time part means midnight. Trailing
/// fractional seconds or a zone suffix ("+01:00", "Z") are ignored, keeping
/// the printed local component.
std::optional<DateTime> parse_datetime(std::string_view text);

/// "YYYY-MM-DD HH:MM:SS"
std::string format_datetime(const DateTime& dt);

}  // namespace enscen
