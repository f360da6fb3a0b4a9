#include "enscen/load_analytics.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

#include "enscen/calendar.hpp"
#include "enscen/error.hpp"

namespace enscen::load {

namespace {

int mode_of(const std::map<int, std::size_t>& counts) {
    int best_key = 0;
    std::size_t best_count = 0;
    for (const auto& [key, count] : counts) {
        if (count > best_count) {  // map order makes ties resolve to the smallest key
            best_key = key;
            best_count = count;
        }
    }
    return best_key;
}

}  // namespace

ConsumerMetadata consumer_metadata(const ConsumerProfile& profile, int year) {
    const std::size_t expected = static_cast<std::size_t>(days_in_year(year)) * 96;
    if (profile.net_kwh.size() != expected) {
        std::ostringstream os;
        os << "profile " << profile.id << " has " << profile.net_kwh.size()
           << " intervals, expected " << expected << " for " << year;
        throw Error("load", os.str());
    }

    ConsumerMetadata meta;
    meta.id = profile.id;
    meta.type = profile.type;

    std::size_t peak_idx = 0, reverse_idx = 0;
    for (std::size_t i = 0; i < expected; ++i) {
        meta.annual_net_kwh += profile.net_kwh[i];
        if (profile.net_kwh[i] > profile.net_kwh[peak_idx]) peak_idx = i;
        if (profile.net_kwh[i] < profile.net_kwh[reverse_idx]) reverse_idx = i;
    }

    auto fill = [&](std::size_t idx, double& kw, std::size_t& interval, double& hour, int& month,
                    int& day) {
        kw = profile.net_kwh[idx] * 4.0;  // kWh per quarter hour -> kW
        interval = idx;
        hour = static_cast<double>(idx % 96) * 0.25;
        day = static_cast<int>(idx / 96) + 1;
        month = month_from_day_of_year(year, day);
    };
    fill(peak_idx, meta.peak_kw, meta.peak_interval, meta.peak_hour, meta.peak_month,
         meta.peak_day);
    fill(reverse_idx, meta.reverse_kw, meta.reverse_interval, meta.reverse_hour,
         meta.reverse_month, meta.reverse_day);
    return meta;
}

PoolSummary pool_summary(std::span<const ConsumerMetadata> pool, std::size_t total_population,
                         std::string label) {
    if (pool.empty()) throw Error("load", "empty consumer pool: " + label);
    if (total_population == 0) throw Error("load", "total population must be positive");

    PoolSummary s;
    s.label = std::move(label);
    s.consumer_count = pool.size();
    s.probability = static_cast<double>(pool.size()) / static_cast<double>(total_population);
    s.max_net_kwh = pool.front().annual_net_kwh;
    s.min_net_kwh = pool.front().annual_net_kwh;

    std::map<int, std::size_t> peak_hours, peak_months, reverse_hours, reverse_months;
    for (const auto& m : pool) {
        s.mean_net_kwh += m.annual_net_kwh;
        s.max_net_kwh = std::max(s.max_net_kwh, m.annual_net_kwh);
        s.min_net_kwh = std::min(s.min_net_kwh, m.annual_net_kwh);
        s.mean_peak_kw += m.peak_kw;
        s.mean_reverse_kw += m.reverse_kw;
        s.mean_peak_hour += m.peak_hour;
        s.mean_reverse_hour += m.reverse_hour;
        ++peak_hours[static_cast<int>(m.peak_hour)];
        ++peak_months[m.peak_month];
        ++reverse_hours[static_cast<int>(m.reverse_hour)];
        ++reverse_months[m.reverse_month];
    }
    const double n = static_cast<double>(pool.size());
    s.mean_net_kwh /= n;
    s.mean_peak_kw /= n;
    s.mean_reverse_kw /= n;
    s.mean_peak_hour /= n;
    s.mean_reverse_hour /= n;
    s.mode_peak_hour = mode_of(peak_hours);
    s.mode_peak_month = mode_of(peak_months);
    s.mode_reverse_hour = mode_of(reverse_hours);
    s.mode_reverse_month = mode_of(reverse_months);
    return s;
}

std::vector<NamedPool> derived_pools(std::span<const ConsumerProfile> profiles, int year) {
    std::vector<ConsumerMetadata> all;
    all.reserve(profiles.size());
    for (const auto& p : profiles) all.push_back(consumer_metadata(p, year));

    auto select = [&](std::string label, std::initializer_list<int> types) {
        NamedPool pool;
        pool.label = std::move(label);
        for (const auto& m : all)
            if (std::find(types.begin(), types.end(), m.type) != types.end())
                pool.members.push_back(m);
        return pool;
    };

    std::vector<NamedPool> pools;
    pools.push_back({"total", all});
    pools.push_back(select("type_1", {1}));
    pools.push_back(select("type_2", {2}));
    pools.push_back(select("type_3", {3}));
    pools.push_back(select("type_4", {4}));
    pools.push_back(select("type_5", {5}));
    pools.push_back(select("pv_owners", {2, 4, 5}));
    pools.push_back(select("ev_owners", {3, 5}));
    pools.push_back(select("pv_without_ev", {2, 4}));
    pools.push_back(select("pv_without_hp", {2, 5}));
    return pools;
}

DayHistogram peak_day_distribution(std::span<const ConsumerMetadata> pool, PeakKind kind,
                                   int year) {
    DayHistogram hist;
    hist.kind = kind;
    hist.year = year;
    hist.counts.assign(static_cast<std::size_t>(days_in_year(year)), 0);
    hist.pool_size = pool.size();
    for (const auto& m : pool) {
        const int day = kind == PeakKind::peak ? m.peak_day : m.reverse_day;
        ++hist.counts[static_cast<std::size_t>(day - 1)];
    }
    return hist;
}

RepresentativeWeek worst_week(const DayHistogram& hist, int window_days) {
    const int days = static_cast<int>(hist.counts.size());
    if (window_days < 1 || window_days > days)
        throw Error("load", "window must be between 1 day and the full year");
    if (hist.pool_size == 0) throw Error("load", "peak-day histogram over an empty pool");

    std::uint64_t window = 0;
    for (int d = 0; d < window_days; ++d) window += hist.counts[static_cast<std::size_t>(d)];

    RepresentativeWeek best;
    best.start_day = 1;
    best.count = window;
    for (int start = 2; start + window_days - 1 <= days; ++start) {
        window += hist.counts[static_cast<std::size_t>(start + window_days - 2)];
        window -= hist.counts[static_cast<std::size_t>(start - 2)];
        if (window > best.count) {  // strict: ties keep the earliest window
            best.count = window;
            best.start_day = start;
        }
    }
    best.end_day = best.start_day + window_days - 1;
    best.fraction = static_cast<double>(best.count) / static_cast<double>(hist.pool_size);
    return best;
}

WeatherSlice align_weather(std::span<const ingest::WeatherRecord> records,
                           const RepresentativeWeek& week) {
    WeatherSlice slice;
    slice.start_day = week.start_day;
    slice.end_day = week.end_day;

    std::map<int, DayWeather> per_day;
    for (const auto& rec : records) {
        if (rec.day_of_year < week.start_day || rec.day_of_year > week.end_day) continue;
        slice.records.push_back(rec);
        auto& day = per_day[rec.day_of_year];
        day.day = rec.day_of_year;
        day.mean_temp_c += rec.ambient_temp_c;
        day.total_rainfall_mm += rec.rainfall_mm;
        if (rec.ghi_wm2 > 0.0) day.ghi_daylight_sum_wm2 += rec.ghi_wm2;
        ++day.records;
    }
    if (slice.records.empty()) {
        std::ostringstream os;
        os << "no weather records overlap days " << week.start_day << ".." << week.end_day;
        throw Error("load", os.str());
    }
    for (auto& [day, agg] : per_day) {
        agg.mean_temp_c /= static_cast<double>(agg.records);
        slice.per_day.push_back(agg);
    }
    return slice;
}

}  // namespace enscen::load
