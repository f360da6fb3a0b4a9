#include "enscen/pv_scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "enscen/calendar.hpp"
#include "enscen/empdist.hpp"
#include "enscen/error.hpp"

namespace enscen::pv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLoadFactorTolerance = 0.01;

}  // namespace

bool NormalizedPVSeries::has(int doy, int quarter) const {
    const std::size_t idx = static_cast<std::size_t>(doy - 1) * 96 + static_cast<std::size_t>(quarter);
    return idx < values.size() && !std::isnan(values[idx]);
}

double NormalizedPVSeries::at(int doy, int quarter) const {
    return values[static_cast<std::size_t>(doy - 1) * 96 + static_cast<std::size_t>(quarter)];
}

std::vector<int> NormalizedPVSeries::complete_days(int month) const {
    std::vector<int> days;
    const int total_days = days_in_year(year);
    for (int doy = 1; doy <= total_days; ++doy) {
        if (month != 0 && month_from_day_of_year(year, doy) != month) continue;
        bool complete = true;
        for (int q = 0; q < 96 && complete; ++q) {
            if (!has(doy, q) || at(doy, q) > kMaxPlausibleNorm) complete = false;
        }
        if (complete) days.push_back(doy);
    }
    return days;
}

NormalizedPVSeries normalize_generation(std::span<const ingest::RawPVRecord> records, int year) {
    NormalizedPVSeries series;
    series.year = year;
    series.values.assign(static_cast<std::size_t>(days_in_year(year)) * 96, kNaN);

    for (const auto& rec : records) {
        if (rec.timestamp.year != year) {
            ++series.skipped_other_year;
            continue;
        }
        const std::size_t idx = static_cast<std::size_t>(rec.day_of_year - 1) * 96 +
                                static_cast<std::size_t>(rec.quarter);
        if (!std::isnan(series.values[idx])) {
            ++series.duplicate_timestamps;
            continue;
        }
        const double norm = rec.measured_mw / rec.capacity_mw;
        series.values[idx] = norm;
        ++series.sample_count;
        if (norm > kMaxPlausibleNorm) ++series.over_unity;
        if (rec.load_factor && std::abs(norm - *rec.load_factor) > kLoadFactorTolerance)
            ++series.load_factor_mismatches;
    }
    return series;
}

QuartileTable monthly_quartiles(const NormalizedPVSeries& series, int month,
                                std::span<const int> levels_percent) {
    if (month < 0 || month > 12) throw Error("pv", "month must be 0 (all) or 1..12");
    if (levels_percent.empty()) throw Error("pv", "quartile table needs at least one level");
    for (int level : levels_percent)
        if (level < 0 || level > 100) throw Error("pv", "percentile level outside [0, 100]");

    QuartileTable table;
    table.month = month;
    table.levels_percent.assign(levels_percent.begin(), levels_percent.end());
    table.norm.assign(levels_percent.size(), std::vector<double>(96, kNaN));

    std::set<int> contributing;
    const int total_days = days_in_year(series.year);
    std::vector<double> pool;
    for (int q = 0; q < 96; ++q) {
        pool.clear();
        for (int doy = 1; doy <= total_days; ++doy) {
            if (month != 0 && month_from_day_of_year(series.year, doy) != month) continue;
            if (!series.has(doy, q)) continue;
            pool.push_back(series.at(doy, q));
            contributing.insert(doy);
        }
        if (pool.empty()) continue;
        std::sort(pool.begin(), pool.end());
        for (std::size_t l = 0; l < table.levels_percent.size(); ++l)
            table.norm[l][q] = empdist::quantile_sorted(
                pool, static_cast<double>(table.levels_percent[l]) / 100.0);
    }
    table.day_count = contributing.size();
    return table;
}

ForecastErrorReport forecast_errors(std::span<const ingest::RawPVRecord> records,
                                    bool daylight_only) {
    ForecastErrorReport report;
    report.daylight_only = daylight_only;

    double sum_week = 0.0, sum_day = 0.0, sum_hour = 0.0;
    std::size_t covered = 0;

    for (const auto& rec : records) {
        if (daylight_only && rec.measured_mw <= 0.0) continue;
        if (rec.forecast_week_ahead_mw) {
            const double e = *rec.forecast_week_ahead_mw - rec.measured_mw;
            sum_week += e * e;
            ++report.rows_week_ahead;
        }
        if (rec.forecast_day_ahead_mw) {
            const double e = *rec.forecast_day_ahead_mw - rec.measured_mw;
            sum_day += e * e;
            ++report.rows_day_ahead;
        }
        if (rec.forecast_hour_ahead_mw) {
            const double e = *rec.forecast_hour_ahead_mw - rec.measured_mw;
            sum_hour += e * e;
            ++report.rows_hour_ahead;
        }
        if (rec.p10_mw && rec.p90_mw) {
            ++report.rows_interval;
            if (rec.measured_mw >= *rec.p10_mw && rec.measured_mw <= *rec.p90_mw) ++covered;
        }
    }

    if (report.rows_week_ahead + report.rows_day_ahead + report.rows_hour_ahead == 0)
        throw Error("pv", "missing forecast columns: no horizon carries any data");

    report.mse_week_ahead =
        report.rows_week_ahead ? sum_week / static_cast<double>(report.rows_week_ahead) : kNaN;
    report.mse_day_ahead =
        report.rows_day_ahead ? sum_day / static_cast<double>(report.rows_day_ahead) : kNaN;
    report.mse_hour_ahead =
        report.rows_hour_ahead ? sum_hour / static_cast<double>(report.rows_hour_ahead) : kNaN;
    report.ratio_week_to_day = (report.rows_week_ahead && report.rows_day_ahead &&
                                report.mse_day_ahead > 0.0)
                                   ? report.mse_week_ahead / report.mse_day_ahead
                                   : kNaN;
    report.ratio_day_to_hour = (report.rows_day_ahead && report.rows_hour_ahead &&
                                report.mse_hour_ahead > 0.0)
                                   ? report.mse_day_ahead / report.mse_hour_ahead
                                   : kNaN;
    report.interval_coverage =
        report.rows_interval
            ? static_cast<double>(covered) / static_cast<double>(report.rows_interval)
            : kNaN;
    return report;
}

KwpDistribution KwpDistribution::discrete(std::vector<std::pair<double, double>> points) {
    if (points.empty()) throw Error("pv", "discrete capacity distribution needs support points");
    double total = 0.0;
    for (const auto& [value, weight] : points) {
        if (value <= 0.0) throw Error("pv", "capacity support points must be positive");
        if (weight <= 0.0) throw Error("pv", "capacity weights must be positive");
        total += weight;
    }
    KwpDistribution d;
    d.form_ = Form::discrete;
    d.points_ = std::move(points);
    for (auto& [value, weight] : d.points_) weight /= total;
    return d;
}

KwpDistribution KwpDistribution::triangular(double min, double mode, double max) {
    if (!(min <= mode && mode <= max) || !(min < max))
        throw Error("pv", "triangular capacity needs min <= mode <= max with min < max");
    if (min <= 0.0) throw Error("pv", "capacity must be positive");
    KwpDistribution d;
    d.form_ = Form::triangular;
    d.min_ = min;
    d.mode_ = mode;
    d.max_ = max;
    return d;
}

double KwpDistribution::sample(UniformSource& rng) const {
    const double u = rng.next_uniform();
    if (form_ == Form::discrete) {
        double cum = 0.0;
        for (const auto& [value, weight] : points_) {
            cum += weight;
            if (u < cum) return value;
        }
        return points_.back().first;  // guards the cum < 1 rounding edge
    }
    // Triangular inverse CDF.
    const double span = max_ - min_;
    const double cut = (mode_ - min_) / span;
    if (u < cut) return min_ + std::sqrt(u * span * (mode_ - min_));
    return max_ - std::sqrt((1.0 - u) * span * (max_ - mode_));
}

double KwpDistribution::mean() const {
    if (form_ == Form::discrete) {
        double m = 0.0;
        for (const auto& [value, weight] : points_) m += value * weight;
        return m;
    }
    return (min_ + mode_ + max_) / 3.0;
}

PVScenario generate_pv_scenario(const NormalizedPVSeries& series, int month,
                                const KwpDistribution& kwp, UniformSource& rng) {
    const std::vector<int> pool = series.complete_days(month);
    if (pool.empty()) {
        std::ostringstream os;
        os << "no complete generation days to draw from (month " << month << ")";
        throw Error("pv", os.str());
    }
    const double u = rng.next_uniform();
    std::size_t idx = static_cast<std::size_t>(u * static_cast<double>(pool.size()));
    if (idx >= pool.size()) idx = pool.size() - 1;

    PVScenario scenario;
    scenario.source_day_of_year = pool[idx];
    scenario.month = month;
    scenario.kwp = kwp.sample(rng);
    scenario.kw.resize(96);
    for (int q = 0; q < 96; ++q)
        scenario.kw[static_cast<std::size_t>(q)] =
            scenario.kwp * series.at(scenario.source_day_of_year, q);
    return scenario;
}

std::vector<PVScenario> generate_pv_batch(const NormalizedPVSeries& series, int month,
                                          const KwpDistribution& kwp, std::size_t n,
                                          std::uint64_t seed) {
    if (n == 0) throw Error("pv", "scenario count must be positive");
    std::vector<PVScenario> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        SeededSampler rng(seed, i);
        out.push_back(generate_pv_scenario(series, month, kwp, rng));
    }
    return out;
}

}  // namespace enscen::pv
