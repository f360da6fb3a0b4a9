#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "enscen/records.hpp"
#include "enscen/sampler.hpp"

namespace enscen::pv {

/// Year of system-wide generation normalized by monitored capacity, indexed
/// as (day_of_year - 1) * 96 + quarter. Missing quarters are NaN. The
/// counters record data oddities seen while normalizing; none of them reject
/// a record.
struct NormalizedPVSeries {
    int year = 2022;
    std::vector<double> values;
    std::size_t sample_count = 0;
    std::size_t duplicate_timestamps = 0;   // later duplicates dropped
    std::size_t skipped_other_year = 0;
    std::size_t over_unity = 0;             // normalized output above the cap
    std::size_t load_factor_mismatches = 0; // published factor disagrees > 0.01

    bool has(int doy, int quarter) const;
    double at(int doy, int quarter) const;

    /// Days of `month` (1..12, or 0 for the whole year) with all 96 quarters
    /// present and none above the plausibility cap. These form the pool that
    /// whole-day scenarios are drawn from.
    std::vector<int> complete_days(int month) const;
};

/// Plausibility cap on normalized output; a quarter above this marks its day
/// as unusable for scenario draws (metering or capacity glitch).
inline constexpr double kMaxPlausibleNorm = 1.2;

NormalizedPVSeries normalize_generation(std::span<const ingest::RawPVRecord> records, int year);

/// Per-quarter-of-day percentile curves pooled over the days of one month
/// (or the whole year). Slots nobody measured stay NaN.
struct QuartileTable {
    int month = 0;  // 0 = whole year
    std::vector<int> levels_percent;
    std::vector<std::vector<double>> norm;  // norm[level][quarter 0..95]
    std::size_t day_count = 0;              // days contributing at least one quarter
};

QuartileTable monthly_quartiles(const NormalizedPVSeries& series, int month,
                                std::span<const int> levels_percent);

/// Mean squared error of each published forecast horizon against measured
/// output, plus the coverage of the published p10..p90 band. Horizons are in
/// MW, so the MSEs are MW^2; the ratios are unitless.
struct ForecastErrorReport {
    double mse_week_ahead = 0.0;
    double mse_day_ahead = 0.0;
    double mse_hour_ahead = 0.0;
    double ratio_week_to_day = 0.0;
    double ratio_day_to_hour = 0.0;
    double interval_coverage = 0.0;  // fraction of rows with measured in [p10, p90]
    std::size_t rows_week_ahead = 0;
    std::size_t rows_day_ahead = 0;
    std::size_t rows_hour_ahead = 0;
    std::size_t rows_interval = 0;
    bool daylight_only = false;
};

/// daylight_only restricts every statistic to rows with measured output
/// above zero. Throws when no forecast column carries any data.
ForecastErrorReport forecast_errors(std::span<const ingest::RawPVRecord> records,
                                    bool daylight_only = false);

/// Installed-capacity distribution for scenario scaling: either discrete
/// (value, weight) support points or a triangular density.
class KwpDistribution {
public:
    enum class Form { discrete, triangular };

    /// Weights are normalized internally; they must be positive.
    static KwpDistribution discrete(std::vector<std::pair<double, double>> points);
    /// Requires min <= mode <= max and min < max.
    static KwpDistribution triangular(double min, double mode, double max);

    double sample(UniformSource& rng) const;
    double mean() const;
    Form form() const { return form_; }

private:
    KwpDistribution() = default;

    Form form_ = Form::discrete;
    std::vector<std::pair<double, double>> points_;  // value, normalized weight
    double min_ = 0.0, mode_ = 0.0, max_ = 0.0;
};

/// One synthetic plant-day: a historical normalized day scaled by a drawn
/// installed capacity.
struct PVScenario {
    int source_day_of_year = 0;
    int month = 0;  // month filter the day was drawn from; 0 = whole year
    double kwp = 0.0;
    std::vector<double> kw;  // 96 quarters
};

/// Draw order per scenario: day first, then capacity. Throws when the month
/// has no complete days to draw from.
PVScenario generate_pv_scenario(const NormalizedPVSeries& series, int month,
                                const KwpDistribution& kwp, UniformSource& rng);

/// Scenario i draws from stream (seed, i); identical output for any caller
/// parallelism. Throws on n == 0.
std::vector<PVScenario> generate_pv_batch(const NormalizedPVSeries& series, int month,
                                          const KwpDistribution& kwp, std::size_t n,
                                          std::uint64_t seed);

}  // namespace enscen::pv
