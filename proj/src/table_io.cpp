#include "enscen/table_io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "enscen/calendar.hpp"
#include "enscen/delimited.hpp"
#include "enscen/error.hpp"
#include "enscen/version.hpp"

namespace enscen::tableio {

namespace {

const char* month_names[] = {"",    "jan", "feb", "mar", "apr", "may", "jun",
                             "jul", "aug", "sep", "oct", "nov", "dec"};

std::string opt_fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void write_meta_lines(std::ostream& os, const OutputMeta& meta) {
    os << "# " << kToolName << ' ' << kVersion << '\n';
    os << "# seed=" << meta.seed << " config=" << meta.config_hash << '\n';
}

nlohmann::json meta_json(const OutputMeta& meta) {
    return {{"tool", kToolName}, {"version", kVersion}, {"seed", meta.seed},
            {"config", meta.config_hash}};
}

void write_histogram(std::ostream& os, const empdist::Histogram1D& hist, const OutputMeta& meta) {
    write_meta_lines(os, meta);
    os << "bin_lo,bin_hi,count,probability\n";
    for (std::size_t i = 0; i < hist.counts.size(); ++i)
        os << fmt(hist.spec.lower(i)) << ',' << fmt(hist.spec.upper(i)) << ',' << hist.counts[i]
           << ',' << fmt(hist.probability(i)) << '\n';
}

void write_conditional(std::ostream& os, const empdist::ConditionalTable& table,
                       const OutputMeta& meta) {
    write_meta_lines(os, meta);
    os << "cond_lo,cond_hi,target_lo,target_hi,count,row_probability\n";
    for (std::size_t r = 0; r < table.counts.size(); ++r) {
        if (table.row_totals[r] == 0) continue;
        for (std::size_t t = 0; t < table.counts[r].size(); ++t) {
            if (table.counts[r][t] == 0) continue;
            const double p = static_cast<double>(table.counts[r][t]) /
                             static_cast<double>(table.row_totals[r]);
            os << fmt(table.cond_spec.lower(r)) << ',' << fmt(table.cond_spec.upper(r)) << ','
               << fmt(table.target_spec.lower(t)) << ',' << fmt(table.target_spec.upper(t)) << ','
               << table.counts[r][t] << ',' << fmt(p) << '\n';
        }
    }
}

void write_joint(std::ostream& os, const empdist::JointConditionalTable& table,
                 const OutputMeta& meta) {
    write_meta_lines(os, meta);
    for (std::size_t d = 0; d < table.cond_specs.size(); ++d)
        os << "cond" << d << "_lo,cond" << d << "_hi,";
    os << "target_lo,target_hi,count,cell_probability\n";
    for (const auto& [bins, hist] : table.cells) {
        for (std::size_t t = 0; t < hist.counts.size(); ++t) {
            if (hist.counts[t] == 0) continue;
            for (std::size_t d = 0; d < table.cond_specs.size(); ++d)
                os << fmt(table.cond_specs[d].lower(bins[d])) << ','
                   << fmt(table.cond_specs[d].upper(bins[d])) << ',';
            os << fmt(table.target_spec.lower(t)) << ',' << fmt(table.target_spec.upper(t)) << ','
               << hist.counts[t] << ',' << fmt(hist.probability(t)) << '\n';
        }
    }
}

nlohmann::json fit_report_json(const ev::FitReport& report, const ev::AttemptStats* stats) {
    nlohmann::json j{{"sessions_used", report.sessions_used},
                     {"skipped_out_of_range", report.skipped_out_of_range},
                     {"skipped_inconsistent", report.skipped_inconsistent},
                     {"empty_departure_rows", report.empty_departure_rows},
                     {"empty_energy_rows", report.empty_energy_rows},
                     {"joint_cells", report.joint_cells}};
    if (stats) {
        j["generation"] = {{"scenarios", stats->scenarios},
                           {"attempts", stats->attempts},
                           {"joint_misses", stats->joint_misses},
                           {"consistency_restarts", stats->consistency_restarts},
                           {"consistency_resamples", stats->consistency_resamples}};
    }
    return j;
}

void write_raw_sessions(std::ostream& os, std::span<const ingest::RawSessionRecord> records,
                        const OutputMeta& meta) {
    write_meta_lines(os, meta);
    os << "session_id,arrival,departure,connection_hours,charge_hours,peak_kw,energy_kwh\n";
    for (const auto& r : records)
        os << r.session_id << ',' << format_datetime(r.arrival) << ','
           << format_datetime(r.departure) << ',' << fmt(r.connection_hours) << ','
           << fmt(r.charge_hours) << ',' << fmt(r.peak_kw) << ',' << fmt(r.energy_kwh) << '\n';
}

void write_pv_records(std::ostream& os, std::span<const ingest::RawPVRecord> records,
                      const OutputMeta& meta) {
    write_meta_lines(os, meta);
    os << "timestamp,measured_mw,forecast_week_ahead_mw,forecast_day_ahead_mw,"
          "forecast_hour_ahead_mw,p10_mw,p90_mw,capacity_mw,load_factor\n";
    for (const auto& r : records)
        os << format_datetime(r.timestamp) << ',' << fmt(r.measured_mw) << ','
           << opt_fmt(r.forecast_week_ahead_mw) << ',' << opt_fmt(r.forecast_day_ahead_mw) << ','
           << opt_fmt(r.forecast_hour_ahead_mw) << ',' << opt_fmt(r.p10_mw) << ','
           << opt_fmt(r.p90_mw) << ',' << fmt(r.capacity_mw) << ',' << opt_fmt(r.load_factor)
           << '\n';
}

void write_weather_records(std::ostream& os, std::span<const ingest::WeatherRecord> records,
                           const OutputMeta& meta) {
    write_meta_lines(os, meta);
    os << "timestamp,ambient_temp_c,wind_speed_ms,humidity_pct,wind_direction_deg,ghi_wm2,"
          "dhi_wm2,rainfall_mm\n";
    for (const auto& r : records)
        os << format_datetime(r.timestamp) << ',' << fmt(r.ambient_temp_c) << ','
           << fmt(r.wind_speed_ms) << ',' << fmt(r.humidity_pct) << ','
           << fmt(r.wind_direction_deg) << ',' << fmt(r.ghi_wm2) << ',' << fmt(r.dhi_wm2) << ','
           << fmt(r.rainfall_mm) << '\n';
}

void write_sessions(std::ostream& os, std::span<const ev::ChargingSession> sessions,
                    const OutputMeta& meta) {
    write_meta_lines(os, meta);
    os << "arrival_hour,departure_hour,connection_hours,charge_hours,peak_kw,energy_kwh\n";
    for (const auto& s : sessions)
        os << fmt(s.arrival_hour) << ',' << fmt(s.departure_hour) << ','
           << fmt(s.connection_hours) << ',' << fmt(s.charge_hours) << ',' << fmt(s.peak_kw)
           << ',' << fmt(s.energy_kwh) << '\n';
}

std::vector<ev::ChargingSession> read_sessions(std::istream& is) {
    TableReader reader(is, ',');
    static constexpr const char* kCols[] = {"arrival_hour", "departure_hour", "connection_hours",
                                            "charge_hours", "peak_kw", "energy_kwh"};
    std::size_t idx[6];
    for (int i = 0; i < 6; ++i) {
        const auto col = reader.column(kCols[i]);
        if (!col)
            throw Error("io", std::string("scenario table misses column ") + kCols[i]);
        idx[i] = *col;
    }
    std::vector<ev::ChargingSession> sessions;
    std::vector<std::string> fields;
    while (reader.next_row(fields)) {
        double v[6];
        for (int i = 0; i < 6; ++i) {
            if (idx[i] >= fields.size())
                throw Error("io", "short scenario row " + std::to_string(reader.row_number()));
            const auto parsed = parse_double_field(fields[idx[i]]);
            if (!parsed)
                throw Error("io", "bad numeric field in scenario row " +
                                      std::to_string(reader.row_number()));
            v[i] = *parsed;
        }
        sessions.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
    }
    return sessions;
}

void write_fanchart(std::ostream& os, const ev::FanchartTable& table, const OutputMeta& meta) {
    write_meta_lines(os, meta);
    os << "slot_start_min";
    for (int level : table.levels_percent) os << ",p" << level;
    os << '\n';
    const std::size_t slots = table.kw.empty() ? 0 : table.kw.front().size();
    for (std::size_t k = 0; k < slots; ++k) {
        os << k * static_cast<std::size_t>(table.resolution_minutes);
        for (std::size_t l = 0; l < table.kw.size(); ++l) os << ',' << fmt(table.kw[l][k]);
        os << '\n';
    }
}

void write_quartiles(std::ostream& os, const pv::QuartileTable& table, const OutputMeta& meta) {
    write_meta_lines(os, meta);
    os << "# month=" << table.month << " days=" << table.day_count << '\n';
    os << "quarter";
    for (int level : table.levels_percent) os << ",p" << level;
    os << '\n';
    for (int q = 0; q < 96; ++q) {
        os << q;
        for (std::size_t l = 0; l < table.norm.size(); ++l)
            os << ',' << fmt(table.norm[l][static_cast<std::size_t>(q)]);
        os << '\n';
    }
}

nlohmann::json forecast_report_json(const pv::ForecastErrorReport& report) {
    auto num = [](double v) -> nlohmann::json {
        if (std::isnan(v)) return nullptr;
        return v;
    };
    return {{"mse_week_ahead_mw2", num(report.mse_week_ahead)},
            {"mse_day_ahead_mw2", num(report.mse_day_ahead)},
            {"mse_hour_ahead_mw2", num(report.mse_hour_ahead)},
            {"ratio_week_to_day", num(report.ratio_week_to_day)},
            {"ratio_day_to_hour", num(report.ratio_day_to_hour)},
            {"interval_coverage", num(report.interval_coverage)},
            {"rows",
             {{"week_ahead", report.rows_week_ahead},
              {"day_ahead", report.rows_day_ahead},
              {"hour_ahead", report.rows_hour_ahead},
              {"interval", report.rows_interval}}},
            {"daylight_only", report.daylight_only}};
}

void write_pv_scenarios(std::ostream& os, std::span<const pv::PVScenario> scenarios,
                        const OutputMeta& meta) {
    write_meta_lines(os, meta);
    os << "scenario,source_day_of_year,month,kwp";
    for (int q = 0; q < 96; ++q) os << ",q" << q;
    os << '\n';
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const auto& s = scenarios[i];
        os << i << ',' << s.source_day_of_year << ',' << s.month << ',' << fmt(s.kwp);
        for (double kw : s.kw) os << ',' << fmt(kw);
        os << '\n';
    }
}

void write_consumer_metadata(std::ostream& os, std::span<const load::ConsumerMetadata> rows,
                             const OutputMeta& meta) {
    write_meta_lines(os, meta);
    os << "consumer_id,type,annual_net_kwh,peak_kw,peak_interval,peak_hour,peak_month,peak_day,"
          "reverse_kw,reverse_interval,reverse_hour,reverse_month,reverse_day\n";
    for (const auto& m : rows)
        os << m.id << ',' << m.type << ',' << fmt(m.annual_net_kwh) << ',' << fmt(m.peak_kw)
           << ',' << m.peak_interval << ',' << fmt(m.peak_hour) << ',' << m.peak_month << ','
           << m.peak_day << ',' << fmt(m.reverse_kw) << ',' << m.reverse_interval << ','
           << fmt(m.reverse_hour) << ',' << m.reverse_month << ',' << m.reverse_day << '\n';
}

void write_pool_summaries(std::ostream& os, std::span<const load::PoolSummary> rows,
                          const OutputMeta& meta) {
    write_meta_lines(os, meta);
    os << "pool,consumers,probability,mean_net_kwh,max_net_kwh,min_net_kwh,mean_peak_kw,"
          "mean_reverse_kw,mode_peak_hour,mode_peak_month,mode_reverse_hour,mode_reverse_month,"
          "mean_peak_hour,mean_reverse_hour\n";
    for (const auto& s : rows)
        os << s.label << ',' << s.consumer_count << ',' << fmt(s.probability) << ','
           << fmt(s.mean_net_kwh) << ',' << fmt(s.max_net_kwh) << ',' << fmt(s.min_net_kwh) << ','
           << fmt(s.mean_peak_kw) << ',' << fmt(s.mean_reverse_kw) << ',' << s.mode_peak_hour
           << ',' << month_names[s.mode_peak_month] << ',' << s.mode_reverse_hour << ','
           << month_names[s.mode_reverse_month] << ',' << fmt(s.mean_peak_hour) << ','
           << fmt(s.mean_reverse_hour) << '\n';
}

void write_day_histogram(std::ostream& os, const load::DayHistogram& hist,
                         const OutputMeta& meta) {
    write_meta_lines(os, meta);
    os << "# kind=" << (hist.kind == load::PeakKind::peak ? "peak" : "reverse_peak")
       << " year=" << hist.year << " pool=" << hist.pool_size << '\n';
    os << "day_of_year,count,fraction\n";
    for (std::size_t d = 0; d < hist.counts.size(); ++d) {
        const double frac = hist.pool_size == 0
                                ? 0.0
                                : static_cast<double>(hist.counts[d]) /
                                      static_cast<double>(hist.pool_size);
        os << d + 1 << ',' << hist.counts[d] << ',' << fmt(frac) << '\n';
    }
}

void write_weather_days(std::ostream& os, const load::WeatherSlice& slice,
                        const OutputMeta& meta) {
    write_meta_lines(os, meta);
    os << "# window=" << slice.start_day << ".." << slice.end_day << '\n';
    os << "day_of_year,mean_temp_c,total_rainfall_mm,ghi_daylight_sum_wm2,records\n";
    for (const auto& d : slice.per_day)
        os << d.day << ',' << fmt(d.mean_temp_c) << ',' << fmt(d.total_rainfall_mm) << ','
           << fmt(d.ghi_daylight_sum_wm2) << ',' << d.records << '\n';
}

nlohmann::json rejection_json(const std::vector<ingest::Rejection>& rejections) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rejections) arr.push_back({{"row", r.row}, {"reason", r.reason}});
    return arr;
}

}  // namespace enscen::tableio
