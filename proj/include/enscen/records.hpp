#pragma once

#include <optional>
#include <string>
#include <vector>

#include "enscen/calendar.hpp"

namespace enscen::ingest {

/// One EV charging event as it appears in the source export.
struct RawSessionRecord {
    std::string session_id;
    DateTime arrival;
    DateTime departure;
    double connection_hours = 0.0;
    double charge_hours = 0.0;
    double peak_kw = 0.0;
    double energy_kwh = 0.0;
};

/// One quarter-hour of system-wide PV data. Forecast and interval columns are
/// optional in the source feed.
struct RawPVRecord {
    DateTime timestamp;
    int day_of_year = 1;
    int quarter = 0;  // 0..95
    double measured_mw = 0.0;
    std::optional<double> forecast_week_ahead_mw;
    std::optional<double> forecast_day_ahead_mw;
    std::optional<double> forecast_hour_ahead_mw;
    std::optional<double> p10_mw;
    std::optional<double> p90_mw;
    double capacity_mw = 0.0;
    std::optional<double> load_factor;
};

/// One consumer x interval smart-meter reading.
struct RawLoadRecord {
    std::string consumer_id;
    int consumer_type = 0;  // 1..5
    DateTime interval_start;
    double offtake_kwh = 0.0;
    double injection_kwh = 0.0;
};

struct WeatherRecord {
    DateTime timestamp;
    int day_of_year = 1;
    double ambient_temp_c = 0.0;
    double wind_speed_ms = 0.0;
    double humidity_pct = 0.0;
    double wind_direction_deg = 0.0;
    double ghi_wm2 = 0.0;
    double dhi_wm2 = 0.0;
    double rainfall_mm = 0.0;
};

}  // namespace enscen::ingest

namespace enscen::load {

/// One consumer's full year of 15-min net load. Net = offtake - injection,
/// so export to the grid is negative. Values are canonicalized to the
/// dataset's declared decimal precision at ingest.
struct ConsumerProfile {
    std::string id;
    int type = 0;  // 1..5
    std::vector<double> net_kwh;

    bool operator==(const ConsumerProfile&) const = default;
};

}  // namespace enscen::load
