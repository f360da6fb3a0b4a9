#include "enscen/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <span>
#include <sstream>

#include "enscen/delimited.hpp"
#include "enscen/error.hpp"

namespace enscen::ingest {

namespace {

constexpr double kPow10[] = {1e0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9};

struct BoundReader {
    std::ifstream file;
    TableReader table;
    std::map<std::string, std::size_t> roles;  // resolved role -> column index
    std::vector<std::string> missing_optional;

    BoundReader(const std::string& path, const Schema& schema,
                std::span<const char* const> required, std::span<const char* const> optional)
        : file(path), table(file, schema.delimiter) {
        if (!file.is_open()) throw Error("ingest", "cannot open file: " + path);
        if (table.header().empty()) throw Error("ingest", "empty file or missing header: " + path);
        for (const char* role : required) {
            const std::string& name = schema.columns.at(role);
            auto idx = table.column(name);
            if (!idx)
                throw Error("ingest", "header mismatch: required column '" + name + "' (role " +
                                          role + ") not found in " + path);
            roles[role] = *idx;
        }
        for (const char* role : optional) {
            auto it = schema.columns.find(role);
            if (it == schema.columns.end()) {
                missing_optional.push_back(role);
                continue;
            }
            if (auto idx = table.column(it->second)) {
                roles[role] = *idx;
            } else {
                missing_optional.push_back(role);
            }
        }
    }

    const std::string* field(const std::vector<std::string>& fields, const char* role) const {
        auto it = roles.find(role);
        if (it == roles.end() || it->second >= fields.size()) return nullptr;
        return &fields[it->second];
    }
};

void check_reject_threshold(const char* what, std::size_t rejected, std::size_t total,
                            double threshold) {
    if (total == 0 || rejected == 0) return;
    const double fraction = static_cast<double>(rejected) / static_cast<double>(total);
    if (fraction > threshold) {
        std::ostringstream os;
        os << what << ": rejected " << rejected << " of " << total << " rows ("
           << fraction * 100.0 << "%, threshold " << threshold * 100.0 << "%); schema mismatch?";
        throw Error("ingest", os.str());
    }
}

}  // namespace

double round_decimal(double value, int decimals) {
    const double scale = kPow10[decimals];
    // q and scale are exact, so the quotient is correctly rounded; repeating
    // the quantization reproduces the same double bit-for-bit.
    return static_cast<double>(std::llround(value * scale)) / scale;
}

Schema Schema::ev_defaults() {
    Schema s;
    s.delimiter = ',';
    s.columns = {
        {"session_id", "TransactionId"},   {"arrival", "UTCTransactionStart"},
        {"departure", "UTCTransactionStop"}, {"connection_time", "ConnectedTime"},
        {"charge_time", "ChargeTime"},     {"peak_power", "MaxPower"},
        {"charged_energy", "TotalEnergy"},
    };
    return s;
}

Schema Schema::pv_defaults() {
    Schema s;
    s.delimiter = ';';
    s.columns = {
        {"timestamp", "Datetime"},
        {"measured", "Measured & Upscaled"},
        {"forecast_week_ahead", "Week-ahead forecast"},
        {"forecast_day_ahead", "Day-ahead 11AM forecast"},
        {"forecast_hour_ahead", "Most recent forecast"},
        {"p10", "Most recent P10"},
        {"p90", "Most recent P90"},
        {"capacity", "Monitored capacity"},
        {"load_factor", "Load factor"},
    };
    return s;
}

Schema Schema::load_defaults() {
    Schema s;
    s.delimiter = ';';
    s.columns = {
        {"consumer_id", "EAN_ID"},
        {"consumer_type", "Consumer_Type"},
        {"timestamp", "Datum_Startuur"},
        {"offtake", "Volume_Afname_kWh"},
        {"injection", "Volume_Injectie_kWh"},
    };
    return s;
}

Schema Schema::weather_defaults() {
    Schema s;
    s.delimiter = ',';
    s.columns = {
        {"timestamp", "Timestamp"},     {"ambient_temp", "AmbientTemp"},
        {"wind_speed", "WindSpeed"},    {"humidity", "Humidity"},
        {"wind_direction", "WindDirection"}, {"ghi", "GHI"},
        {"dhi", "DHI"},                 {"rainfall", "Rainfall"},
    };
    return s;
}

Schema Schema::ev_canonical() {
    Schema s;
    s.delimiter = ',';
    s.columns = {
        {"session_id", "session_id"},   {"arrival", "arrival"},
        {"departure", "departure"},     {"connection_time", "connection_hours"},
        {"charge_time", "charge_hours"}, {"peak_power", "peak_kw"},
        {"charged_energy", "energy_kwh"},
    };
    return s;
}

Schema Schema::pv_canonical() {
    Schema s;
    s.delimiter = ',';
    s.columns = {
        {"timestamp", "timestamp"},
        {"measured", "measured_mw"},
        {"forecast_week_ahead", "forecast_week_ahead_mw"},
        {"forecast_day_ahead", "forecast_day_ahead_mw"},
        {"forecast_hour_ahead", "forecast_hour_ahead_mw"},
        {"p10", "p10_mw"},
        {"p90", "p90_mw"},
        {"capacity", "capacity_mw"},
        {"load_factor", "load_factor"},
    };
    return s;
}

Schema Schema::weather_canonical() {
    Schema s;
    s.delimiter = ',';
    s.columns = {
        {"timestamp", "timestamp"},       {"ambient_temp", "ambient_temp_c"},
        {"wind_speed", "wind_speed_ms"},  {"humidity", "humidity_pct"},
        {"wind_direction", "wind_direction_deg"}, {"ghi", "ghi_wm2"},
        {"dhi", "dhi_wm2"},               {"rainfall", "rainfall_mm"},
    };
    return s;
}

nlohmann::json Schema::to_json() const {
    nlohmann::json j;
    j["delimiter"] = std::string(1, delimiter);
    j["columns"] = columns;
    j["reject_threshold"] = reject_threshold;
    j["year"] = year;
    j["offtake_is_average_kw"] = offtake_is_average_kw;
    j["max_connection_hours"] = max_connection_hours;
    j["net_decimals"] = net_decimals;
    return j;
}

Schema Schema::from_json(const nlohmann::json& j, const Schema& base) {
    Schema s = base;
    if (j.contains("delimiter")) {
        const auto d = j.at("delimiter").get<std::string>();
        if (d.size() != 1) throw Error("ingest", "schema delimiter must be one character");
        s.delimiter = d[0];
    }
    if (j.contains("columns"))
        for (const auto& [role, name] : j.at("columns").items())
            s.columns[role] = name.get<std::string>();
    if (j.contains("reject_threshold")) s.reject_threshold = j.at("reject_threshold").get<double>();
    if (j.contains("year")) s.year = j.at("year").get<int>();
    if (j.contains("offtake_is_average_kw"))
        s.offtake_is_average_kw = j.at("offtake_is_average_kw").get<bool>();
    if (j.contains("max_connection_hours"))
        s.max_connection_hours = j.at("max_connection_hours").get<double>();
    if (j.contains("net_decimals")) s.net_decimals = j.at("net_decimals").get<int>();
    return s;
}

LoadResult<RawSessionRecord> load_ev_dataset(const std::string& path, const Schema& schema) {
    static constexpr const char* kRequired[] = {"session_id",    "arrival",
                                                "departure",     "connection_time",
                                                "charge_time",   "peak_power",
                                                "charged_energy"};
    BoundReader r(path, schema, kRequired, {});
    LoadResult<RawSessionRecord> out;

    std::vector<std::string> fields;
    while (r.table.next_row(fields)) {
        ++out.data_rows;
        const std::size_t row = r.table.row_number();
        auto reject = [&](std::string reason) {
            out.rejections.push_back({row, std::move(reason)});
        };

        RawSessionRecord rec;
        rec.session_id = *r.field(fields, "session_id");
        auto arr = parse_datetime(*r.field(fields, "arrival"));
        auto dep = parse_datetime(*r.field(fields, "departure"));
        auto conn = parse_double_field(*r.field(fields, "connection_time"));
        auto charge = parse_double_field(*r.field(fields, "charge_time"));
        auto peak = parse_double_field(*r.field(fields, "peak_power"));
        auto energy = parse_double_field(*r.field(fields, "charged_energy"));
        if (!arr || !dep) {
            reject("malformed timestamp");
            continue;
        }
        if (!conn || !charge || !peak || !energy) {
            reject("malformed numeric field");
            continue;
        }
        rec.arrival = *arr;
        rec.departure = *dep;
        rec.connection_hours = *conn;
        rec.charge_hours = *charge;
        rec.peak_kw = *peak;
        rec.energy_kwh = *energy;

        if (minutes_since_epoch(rec.departure) < minutes_since_epoch(rec.arrival)) {
            reject("departure before arrival");
            continue;
        }
        if (rec.connection_hours < 0.0 || rec.charge_hours < 0.0) {
            reject("negative duration");
            continue;
        }
        if (rec.charge_hours > rec.connection_hours + 0.01) {
            reject("charge exceeds connection");
            continue;
        }
        if (rec.peak_kw < 0.0 || rec.peak_kw > 23.0) {
            reject("peak power out of range");
            continue;
        }
        if (rec.energy_kwh < 0.0) {
            reject("negative charged energy");
            continue;
        }
        const double elapsed_h =
            static_cast<double>(minutes_since_epoch(rec.departure) -
                                minutes_since_epoch(rec.arrival)) / 60.0;
        if (elapsed_h >= schema.max_connection_hours ||
            rec.connection_hours >= schema.max_connection_hours) {
            reject("connection exceeds model range");
            continue;
        }
        out.records.push_back(std::move(rec));
    }
    check_reject_threshold("EV dataset", out.rejections.size(), out.data_rows,
                           schema.reject_threshold);
    return out;
}

LoadResult<RawPVRecord> load_pv_dataset(const std::string& path, const Schema& schema) {
    static constexpr const char* kRequired[] = {"timestamp", "measured", "capacity"};
    static constexpr const char* kOptional[] = {"forecast_week_ahead", "forecast_day_ahead",
                                                "forecast_hour_ahead", "p10", "p90",
                                                "load_factor"};
    BoundReader r(path, schema, kRequired, kOptional);
    LoadResult<RawPVRecord> out;
    for (const auto& role : r.missing_optional)
        out.warnings.push_back("optional column for role '" + role + "' not found; disabled");

    std::vector<std::string> fields;
    while (r.table.next_row(fields)) {
        ++out.data_rows;
        const std::size_t row = r.table.row_number();
        auto reject = [&](std::string reason) {
            out.rejections.push_back({row, std::move(reason)});
        };

        auto ts = parse_datetime(*r.field(fields, "timestamp"));
        auto measured = parse_double_field(*r.field(fields, "measured"));
        auto capacity = parse_double_field(*r.field(fields, "capacity"));
        if (!ts) {
            reject("malformed timestamp");
            continue;
        }
        if (!measured || !capacity) {
            reject("malformed numeric field");
            continue;
        }
        RawPVRecord rec;
        rec.timestamp = *ts;
        rec.day_of_year = day_of_year(ts->year, ts->month, ts->day);
        rec.quarter = quarter_of_day(*ts);
        rec.measured_mw = *measured;
        rec.capacity_mw = *capacity;
        auto opt = [&](const char* role) -> std::optional<double> {
            const std::string* f = r.field(fields, role);
            if (!f) return std::nullopt;
            return parse_double_field(*f);
        };
        rec.forecast_week_ahead_mw = opt("forecast_week_ahead");
        rec.forecast_day_ahead_mw = opt("forecast_day_ahead");
        rec.forecast_hour_ahead_mw = opt("forecast_hour_ahead");
        rec.p10_mw = opt("p10");
        rec.p90_mw = opt("p90");
        rec.load_factor = opt("load_factor");

        if (rec.measured_mw < 0.0) {
            reject("negative measured generation");
            continue;
        }
        if (rec.capacity_mw <= 0.0) {
            reject("non-positive capacity");
            continue;
        }
        if (rec.p10_mw && rec.p90_mw && *rec.p10_mw > *rec.p90_mw) {
            reject("interval bounds inverted (p10 > p90)");
            continue;
        }
        out.records.push_back(std::move(rec));
    }
    check_reject_threshold("PV dataset", out.rejections.size(), out.data_rows,
                           schema.reject_threshold);

    const std::size_t expected = static_cast<std::size_t>(days_in_year(schema.year)) * 96;
    if (out.records.size() != expected) {
        std::ostringstream os;
        os << "expected " << expected << " quarter-hour records for " << schema.year << ", got "
           << out.records.size();
        out.warnings.push_back(os.str());
    }
    return out;
}

LoadResult<WeatherRecord> load_weather(const std::string& path, const Schema& schema) {
    static constexpr const char* kRequired[] = {"timestamp", "ambient_temp", "wind_speed",
                                                "humidity",  "wind_direction", "ghi",
                                                "dhi",       "rainfall"};
    BoundReader r(path, schema, kRequired, {});
    LoadResult<WeatherRecord> out;

    std::vector<std::string> fields;
    while (r.table.next_row(fields)) {
        ++out.data_rows;
        const std::size_t row = r.table.row_number();
        auto reject = [&](std::string reason) {
            out.rejections.push_back({row, std::move(reason)});
        };

        auto ts = parse_datetime(*r.field(fields, "timestamp"));
        if (!ts) {
            reject("malformed timestamp");
            continue;
        }
        WeatherRecord rec;
        rec.timestamp = *ts;
        rec.day_of_year = day_of_year(ts->year, ts->month, ts->day);
        bool ok = true;
        auto num = [&](const char* role, double& dst) {
            auto v = parse_double_field(*r.field(fields, role));
            if (!v) ok = false;
            else dst = *v;
        };
        num("ambient_temp", rec.ambient_temp_c);
        num("wind_speed", rec.wind_speed_ms);
        num("humidity", rec.humidity_pct);
        num("wind_direction", rec.wind_direction_deg);
        num("ghi", rec.ghi_wm2);
        num("dhi", rec.dhi_wm2);
        num("rainfall", rec.rainfall_mm);
        if (!ok) {
            reject("malformed numeric field");
            continue;
        }
        if (rec.humidity_pct < 0.0 || rec.humidity_pct > 100.0) {
            reject("humidity out of range");
            continue;
        }
        if (rec.dhi_wm2 < 0.0 || rec.ghi_wm2 < 0.0) {
            reject("negative irradiance");
            continue;
        }
        if (rec.dhi_wm2 > rec.ghi_wm2) {
            reject("diffuse exceeds global");
            continue;
        }
        if (rec.wind_direction_deg < 0.0 || rec.wind_direction_deg >= 360.0) {
            reject("wind direction out of range");
            continue;
        }
        out.records.push_back(rec);
    }
    check_reject_threshold("weather dataset", out.rejections.size(), out.data_rows,
                           schema.reject_threshold);
    return out;
}

FluviusResult load_fluvius(const std::string& path, const Schema& schema) {
    static constexpr const char* kRequired[] = {"consumer_id", "consumer_type", "timestamp",
                                                "offtake", "injection"};
    BoundReader r(path, schema, kRequired, {});
    FluviusResult out;

    struct IntervalRow {
        std::size_t nominal;  // (doy-1)*96 + quarter
        std::size_t file_order;
        double net;
    };
    struct Consumer {
        int type = 0;
        bool type_conflict = false;
        std::vector<IntervalRow> rows;
    };
    std::map<std::string, Consumer> consumers;

    const int year = schema.year;
    const std::size_t expected = static_cast<std::size_t>(days_in_year(year)) * 96;
    const double unit_scale = schema.offtake_is_average_kw ? 0.25 : 1.0;

    std::vector<std::string> fields;
    while (r.table.next_row(fields)) {
        ++out.data_rows;
        const std::size_t row = r.table.row_number();
        auto reject = [&](std::string reason) {
            out.row_rejections.push_back({row, std::move(reason)});
        };

        auto ts = parse_datetime(*r.field(fields, "timestamp"));
        auto type = parse_int_field(*r.field(fields, "consumer_type"));
        auto offtake = parse_double_field(*r.field(fields, "offtake"));
        auto injection = parse_double_field(*r.field(fields, "injection"));
        const std::string& id = *r.field(fields, "consumer_id");
        if (id.empty()) {
            reject("empty consumer id");
            continue;
        }
        if (!ts) {
            reject("malformed timestamp");
            continue;
        }
        if (!type || *type < 1 || *type > 5) {
            reject("unknown consumer type");
            continue;
        }
        if (!offtake || !injection) {
            reject("malformed numeric field");
            continue;
        }
        if (*offtake < 0.0 || *injection < 0.0) {
            reject("negative energy");
            continue;
        }
        if (ts->year != year) {
            reject("timestamp outside analysis year");
            continue;
        }

        auto& c = consumers[id];
        if (c.type == 0) c.type = static_cast<int>(*type);
        else if (c.type != static_cast<int>(*type)) c.type_conflict = true;

        const std::size_t nominal =
            static_cast<std::size_t>(day_of_year(ts->year, ts->month, ts->day) - 1) * 96 +
            static_cast<std::size_t>(quarter_of_day(*ts));
        const double net =
            round_decimal((*offtake - *injection) * unit_scale, schema.net_decimals);
        c.rows.push_back({nominal, out.data_rows, net});
    }
    check_reject_threshold("load dataset", out.row_rejections.size(), out.data_rows,
                           schema.reject_threshold);

    for (auto& [id, c] : consumers) {
        if (c.type_conflict) {
            out.consumer_rejections.push_back({id, "inconsistent consumer type"});
            continue;
        }
        std::stable_sort(c.rows.begin(), c.rows.end(), [](const auto& a, const auto& b) {
            return a.nominal != b.nominal ? a.nominal < b.nominal : a.file_order < b.file_order;
        });

        bool has_duplicate = false;
        for (std::size_t i = 1; i < c.rows.size(); ++i)
            if (c.rows[i].nominal == c.rows[i - 1].nominal) has_duplicate = true;

        if (c.rows.size() == expected) {
            // Exact yearly count: assign by interval order. This also resolves
            // the DST duplicate/gap pair in local-time files.
            load::ConsumerProfile p;
            p.id = id;
            p.type = c.type;
            p.net_kwh.resize(expected);
            for (std::size_t i = 0; i < expected; ++i) p.net_kwh[i] = c.rows[i].net;
            out.profiles.push_back(std::move(p));
            continue;
        }
        if (c.rows.size() > expected || (has_duplicate && c.rows.size() != expected)) {
            // find a duplicated timestamp to report
            std::size_t dup = 0;
            for (std::size_t i = 1; i < c.rows.size(); ++i)
                if (c.rows[i].nominal == c.rows[i - 1].nominal) {
                    dup = c.rows[i].nominal;
                    break;
                }
            std::ostringstream os;
            os << "duplicate interval at day " << dup / 96 + 1 << " quarter " << dup % 96;
            out.consumer_rejections.push_back({id, os.str()});
            continue;
        }
        // fewer rows than the year: report the first missing interval
        std::size_t missing = expected;
        std::size_t cursor = 0;
        for (std::size_t i = 0; i < expected; ++i) {
            if (cursor < c.rows.size() && c.rows[cursor].nominal == i) {
                ++cursor;
            } else {
                missing = i;
                break;
            }
        }
        std::ostringstream os;
        os << "missing interval at day " << missing / 96 + 1 << " quarter " << missing % 96;
        out.consumer_rejections.push_back({id, os.str()});
    }

    std::sort(out.profiles.begin(), out.profiles.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

}  // namespace enscen::ingest
