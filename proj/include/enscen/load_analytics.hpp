#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "enscen/records.hpp"

namespace enscen::load {

/// Per-consumer yearly figures derived from the 15-min net profile. Powers
/// are interval energy times four (kWh per quarter hour -> kW). The reverse
/// peak is the most negative interval, i.e. the strongest export; it stays
/// signed. Ties resolve to the earliest interval.
struct ConsumerMetadata {
    std::string id;
    int type = 0;
    double annual_net_kwh = 0.0;

    double peak_kw = 0.0;
    std::size_t peak_interval = 0;
    double peak_hour = 0.0;  // interval-start clock hour, fractional
    int peak_month = 1;
    int peak_day = 1;  // day of year

    double reverse_kw = 0.0;
    std::size_t reverse_interval = 0;
    double reverse_hour = 0.0;
    int reverse_month = 1;
    int reverse_day = 1;
};

/// Throws when the profile length does not match the year's interval count.
ConsumerMetadata consumer_metadata(const ConsumerProfile& profile, int year = 2022);

/// Aggregate row over one pool of consumers, shaped like the summary tables
/// the analytics commands print. Modal hours use 1-hour bins; modal ties
/// resolve to the smallest hour / earliest month.
struct PoolSummary {
    std::string label;
    std::size_t consumer_count = 0;
    double probability = 0.0;  // count / total population
    double mean_net_kwh = 0.0;
    double max_net_kwh = 0.0;
    double min_net_kwh = 0.0;
    double mean_peak_kw = 0.0;
    double mean_reverse_kw = 0.0;
    int mode_peak_hour = 0;
    int mode_peak_month = 1;
    int mode_reverse_hour = 0;
    int mode_reverse_month = 1;
    double mean_peak_hour = 0.0;
    double mean_reverse_hour = 0.0;
};

PoolSummary pool_summary(std::span<const ConsumerMetadata> pool, std::size_t total_population,
                         std::string label);

struct NamedPool {
    std::string label;
    std::vector<ConsumerMetadata> members;
};

/// The standard pool decomposition: everyone, the five consumer types, and
/// the ownership slices that cut across them (PV owners, EV owners, PV
/// without EV, PV without heat pump).
std::vector<NamedPool> derived_pools(std::span<const ConsumerProfile> profiles, int year = 2022);

enum class PeakKind { peak, reverse_peak };

/// How many consumers place their yearly (reverse) peak on each day.
struct DayHistogram {
    PeakKind kind = PeakKind::peak;
    int year = 2022;
    std::vector<std::uint64_t> counts;  // index day-1
    std::size_t pool_size = 0;
};

DayHistogram peak_day_distribution(std::span<const ConsumerMetadata> pool, PeakKind kind,
                                   int year = 2022);

/// The window of `window_days` consecutive days holding the most consumer
/// peaks; earliest window on ties. Days are 1-based and inclusive.
struct RepresentativeWeek {
    int start_day = 1;
    int end_day = 1;
    double fraction = 0.0;  // pool share peaking inside the window
    std::uint64_t count = 0;
};

RepresentativeWeek worst_week(const DayHistogram& hist, int window_days);

/// Weather context for a representative window: the overlapping records plus
/// per-day aggregates (daylight GHI sums only count positive samples).
struct DayWeather {
    int day = 1;
    double mean_temp_c = 0.0;
    double total_rainfall_mm = 0.0;
    double ghi_daylight_sum_wm2 = 0.0;
    std::size_t records = 0;
};

struct WeatherSlice {
    int start_day = 1;
    int end_day = 1;
    std::vector<ingest::WeatherRecord> records;
    std::vector<DayWeather> per_day;
};

/// Throws when no weather record falls inside the window.
WeatherSlice align_weather(std::span<const ingest::WeatherRecord> records,
                           const RepresentativeWeek& week);

}  // namespace enscen::load
