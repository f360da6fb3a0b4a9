#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "enscen/records.hpp"

#include "json.hpp"

namespace enscen::ingest {

/// Declarative column mapping (role -> header name) plus the per-provider
/// parsing knobs. Providers ship different headers, so the mapping lives in
/// config; the defaults below follow each provider's current published
/// format.
struct Schema {
    char delimiter = ',';
    std::map<std::string, std::string> columns;  // role -> column header
    double reject_threshold = 0.10;              // abort above this rejected fraction
    int year = 2022;                             // analysis year for interval datasets
    bool offtake_is_average_kw = false;          // Fluvius units flag; default kWh per interval
    double max_connection_hours = 24.0;          // sessions at/over this are out of model range
    int net_decimals = 3;                        // native decimal precision of net load values

    static Schema ev_defaults();
    static Schema pv_defaults();
    static Schema load_defaults();
    static Schema weather_defaults();

    /// Schemas matching this tool's own canonical exports, so ingest output
    /// feeds straight back into the analysis and generation commands.
    static Schema ev_canonical();
    static Schema pv_canonical();
    static Schema weather_canonical();

    nlohmann::json to_json() const;
    static Schema from_json(const nlohmann::json& j, const Schema& base);
};

struct Rejection {
    std::size_t row = 0;  // 1-based data-row index (header excluded)
    std::string reason;
};

template <class T>
struct LoadResult {
    std::vector<T> records;
    std::vector<Rejection> rejections;
    std::vector<std::string> warnings;
    std::size_t data_rows = 0;
};

/// Every data row lands either in records or in rejections (with row number
/// and reason). Throws enscen::Error when the file is unreadable, a required
/// column is missing, or the rejected fraction exceeds the schema threshold.
LoadResult<RawSessionRecord> load_ev_dataset(const std::string& path, const Schema& schema);
LoadResult<RawPVRecord> load_pv_dataset(const std::string& path, const Schema& schema);
LoadResult<WeatherRecord> load_weather(const std::string& path, const Schema& schema);

struct ConsumerRejection {
    std::string consumer_id;
    std::string reason;
};

struct FluviusResult {
    std::vector<load::ConsumerProfile> profiles;  // sorted by consumer id
    std::vector<Rejection> row_rejections;
    std::vector<ConsumerRejection> consumer_rejections;
    std::vector<std::string> warnings;
    std::size_t data_rows = 0;
};

/// Groups interval rows into per-consumer net-load years. Consumers with
/// missing intervals are rejected with the first missing timestamp; duplicate
/// (consumer, interval) pairs are an error unless the row count still matches
/// the year exactly (daylight-saving duplication), in which case intervals
/// are assigned by timestamp order.
FluviusResult load_fluvius(const std::string& path, const Schema& schema);

/// Value canonicalized to `decimals` decimal digits; the correctly rounded
/// double of that decimal, so requantizing is a fixed point.
double round_decimal(double value, int decimals);

}  // namespace enscen::ingest
