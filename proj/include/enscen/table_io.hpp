#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "enscen/empdist.hpp"
#include "enscen/ev_scenario.hpp"
#include "enscen/ingest.hpp"
#include "enscen/load_analytics.hpp"
#include "enscen/pv_scenario.hpp"

#include "json.hpp"

namespace enscen::tableio {

/// Provenance stamped on every output: tool version plus the seed and config
/// hash of the run. Deliberately no timestamps, so reruns are byte-identical.
struct OutputMeta {
    std::uint64_t seed = 0;
    std::string config_hash;
};

void write_meta_lines(std::ostream& os, const OutputMeta& meta);
nlohmann::json meta_json(const OutputMeta& meta);

/// Shortest representation that round-trips for table output ("%.10g").
std::string fmt(double v);

void write_histogram(std::ostream& os, const empdist::Histogram1D& hist, const OutputMeta& meta);
void write_conditional(std::ostream& os, const empdist::ConditionalTable& table,
                       const OutputMeta& meta);
void write_joint(std::ostream& os, const empdist::JointConditionalTable& table,
                 const OutputMeta& meta);

nlohmann::json fit_report_json(const ev::FitReport& report, const ev::AttemptStats* stats);

/// Canonical per-dataset exports; each is readable back through the matching
/// Schema::*_canonical() mapping.
void write_raw_sessions(std::ostream& os, std::span<const ingest::RawSessionRecord> records,
                        const OutputMeta& meta);
void write_pv_records(std::ostream& os, std::span<const ingest::RawPVRecord> records,
                      const OutputMeta& meta);
void write_weather_records(std::ostream& os, std::span<const ingest::WeatherRecord> records,
                           const OutputMeta& meta);

/// Generated charging scenarios (model coordinates, no ids).
void write_sessions(std::ostream& os, std::span<const ev::ChargingSession> sessions,
                    const OutputMeta& meta);
std::vector<ev::ChargingSession> read_sessions(std::istream& is);

void write_fanchart(std::ostream& os, const ev::FanchartTable& table, const OutputMeta& meta);
void write_quartiles(std::ostream& os, const pv::QuartileTable& table, const OutputMeta& meta);
nlohmann::json forecast_report_json(const pv::ForecastErrorReport& report);

void write_pv_scenarios(std::ostream& os, std::span<const pv::PVScenario> scenarios,
                        const OutputMeta& meta);

void write_consumer_metadata(std::ostream& os, std::span<const load::ConsumerMetadata> rows,
                             const OutputMeta& meta);
void write_pool_summaries(std::ostream& os, std::span<const load::PoolSummary> rows,
                          const OutputMeta& meta);
void write_day_histogram(std::ostream& os, const load::DayHistogram& hist, const OutputMeta& meta);
void write_weather_days(std::ostream& os, const load::WeatherSlice& slice, const OutputMeta& meta);

/// Ingest run summary (rows, acceptance, rejection reasons) as JSON.
nlohmann::json rejection_json(const std::vector<ingest::Rejection>& rejections);

}  // namespace enscen::tableio
