#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "enscen/compact_store.hpp"
#include "enscen/delimited.hpp"
#include "enscen/error.hpp"
#include "enscen/ev_scenario.hpp"
#include "enscen/ingest.hpp"
#include "enscen/load_analytics.hpp"
#include "enscen/pv_scenario.hpp"
#include "enscen/run_config.hpp"
#include "enscen/table_io.hpp"
#include "enscen/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOpts {
    std::string config_path;
    enscen::RunConfig cfg;
    bool seed_set = false;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string format;
    std::string out_dir;

    /// Config file first, then explicit flags on top.
    void finalize() {
        if (!config_path.empty()) cfg = enscen::RunConfig::load_file(config_path);
        if (seed_set) cfg.seed = seed;
        if (threads != 0) cfg.threads = threads;
        if (!format.empty()) {
            if (format != "csv" && format != "json")
                throw enscen::Error("cli", "format must be csv or json");
            cfg.format = format;
        }
        if (!out_dir.empty()) cfg.out_dir = out_dir;
    }

    enscen::tableio::OutputMeta meta() const { return {cfg.seed, cfg.hash()}; }
    bool json_output() const { return cfg.format == "json"; }
};

std::ofstream open_out(const std::string& path) {
    if (const fs::path dir = fs::path(path).parent_path(); !dir.empty())
        fs::create_directories(dir);
    std::ofstream out(path);
    if (!out) throw enscen::Error("cli", "cannot open output file: " + path);
    return out;
}

void print_summary(const json& summary, bool as_json) {
    if (as_json) {
        std::cout << summary.dump(2) << '\n';
        return;
    }
    for (const auto& [key, value] : summary.items()) {
        if (value.is_string()) std::cout << key << '=' << value.get<std::string>() << '\n';
        else std::cout << key << '=' << value.dump() << '\n';
    }
}

std::vector<int> default_fanchart_levels() { return {5, 25, 50, 75, 95}; }
std::vector<int> default_quartile_levels() { return {10, 25, 50, 75, 90}; }

/// "triangular:min,mode,max" or "discrete:value=weight,value=weight,..."
enscen::pv::KwpDistribution parse_kwp_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw enscen::Error("cli", "capacity spec needs a form prefix, e.g. triangular:2,5,10");
    const std::string form = spec.substr(0, colon);
    const std::string args = spec.substr(colon + 1);

    std::vector<std::string> parts;
    std::string token;
    for (char c : args) {
        if (c == ',') {
            parts.push_back(token);
            token.clear();
        } else {
            token.push_back(c);
        }
    }
    parts.push_back(token);

    if (form == "triangular") {
        if (parts.size() != 3)
            throw enscen::Error("cli", "triangular capacity needs min,mode,max");
        double v[3];
        for (int i = 0; i < 3; ++i) {
            const auto parsed = enscen::parse_double_field(parts[static_cast<std::size_t>(i)]);
            if (!parsed) throw enscen::Error("cli", "bad triangular parameter: " + parts[i]);
            v[i] = *parsed;
        }
        return enscen::pv::KwpDistribution::triangular(v[0], v[1], v[2]);
    }
    if (form == "discrete") {
        std::vector<std::pair<double, double>> points;
        for (const auto& part : parts) {
            const auto eq = part.find('=');
            if (eq == std::string::npos)
                throw enscen::Error("cli", "discrete capacity points are value=weight: " + part);
            const auto value = enscen::parse_double_field(part.substr(0, eq));
            const auto weight = enscen::parse_double_field(part.substr(eq + 1));
            if (!value || !weight)
                throw enscen::Error("cli", "bad discrete capacity point: " + part);
            points.emplace_back(*value, *weight);
        }
        return enscen::pv::KwpDistribution::discrete(std::move(points));
    }
    throw enscen::Error("cli", "unknown capacity form: " + form);
}

json warnings_json(const std::vector<std::string>& warnings) {
    json arr = json::array();
    for (const auto& w : warnings) arr.push_back(w);
    return arr;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Empirical scenario toolkit for EV, PV, and net-load datasets"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalOpts g;
    app.add_option("--config", g.config_path, "JSON run configuration")
        ->envname("ENSCEN_CONFIG");
    auto* seed_opt = app.add_option("--seed", g.seed, "Random seed for generation commands");
    app.add_option("--threads", g.threads, "Worker threads for batch generation");
    app.add_option("--format", g.format, "Summary format on stdout: csv (key=value) or json");
    app.add_option("--out-dir", g.out_dir, "Directory for multi-file outputs");

    // ---- ingest ----------------------------------------------------------
    auto* ingest = app.add_subcommand("ingest", "Validate a provider dataset, emit canonical data");
    std::string in_path, out_path, rejects_path, plain_dump_path;

    auto* ingest_ev = ingest->add_subcommand("ev", "Charging sessions");
    ingest_ev->add_option("--in", in_path)->required();
    ingest_ev->add_option("--out", out_path, "Canonical session CSV");
    ingest_ev->add_option("--rejects", rejects_path, "Rejection report (JSON)");

    auto* ingest_pv = ingest->add_subcommand("pv", "System-wide generation feed");
    ingest_pv->add_option("--in", in_path)->required();
    ingest_pv->add_option("--out", out_path, "Canonical PV CSV");
    ingest_pv->add_option("--rejects", rejects_path);

    auto* ingest_weather = ingest->add_subcommand("weather", "Weather station series");
    ingest_weather->add_option("--in", in_path)->required();
    ingest_weather->add_option("--out", out_path, "Canonical weather CSV");
    ingest_weather->add_option("--rejects", rejects_path);

    auto* ingest_load = ingest->add_subcommand("load", "Smart-meter net load -> compact store");
    ingest_load->add_option("--in", in_path)->required();
    ingest_load->add_option("--out", out_path, "Compact store path")->required();
    ingest_load->add_option("--plain-dump", plain_dump_path,
                            "Also write the uncompressed reference dump");

    // ---- analyze ---------------------------------------------------------
    auto* analyze = app.add_subcommand("analyze", "Fit distributions and compute reports");
    int month = 0;
    std::vector<int> levels;
    bool daylight_only = false;
    std::string store_path, kind = "peak", week_spec;
    int window_days = 7;

    auto* an_ev = analyze->add_subcommand("ev-dists", "Session distribution tables");
    an_ev->add_option("--in", in_path, "Canonical session CSV")->required();

    auto* an_pvq = analyze->add_subcommand("pv-quartiles", "Normalized per-quarter percentiles");
    an_pvq->add_option("--in", in_path, "Canonical PV CSV")->required();
    an_pvq->add_option("--month", month, "1..12, or 0 for the whole year");
    an_pvq->add_option("--levels", levels, "Percentile levels")->delimiter(',');
    an_pvq->add_option("--out", out_path)->required();

    auto* an_pvf = analyze->add_subcommand("pv-forecast", "Forecast error report");
    an_pvf->add_option("--in", in_path, "Canonical PV CSV")->required();
    an_pvf->add_flag("--daylight-only", daylight_only, "Only quarters with measured output");
    an_pvf->add_option("--out", out_path, "Report JSON (also printed)");

    auto* an_meta = analyze->add_subcommand("load-meta", "Per-consumer yearly metadata");
    an_meta->add_option("--store", store_path)->required();
    an_meta->add_option("--out", out_path)->required();

    auto* an_peaks = analyze->add_subcommand("peaks", "Peak-day histogram and worst window");
    an_peaks->add_option("--store", store_path)->required();
    an_peaks->add_option("--kind", kind)->check(CLI::IsMember({"peak", "reverse"}));
    an_peaks->add_option("--window", window_days, "Window length in days");
    an_peaks->add_option("--out", out_path, "Day histogram CSV")->required();

    auto* an_weather = analyze->add_subcommand("weather", "Weather aligned to a day window");
    an_weather->add_option("--weather", in_path, "Canonical weather CSV")->required();
    an_weather->add_option("--week", week_spec, "start:end days of year")->required();
    an_weather->add_option("--out", out_path, "Per-day aggregates CSV")->required();

    // ---- generate --------------------------------------------------------
    auto* generate = app.add_subcommand("generate", "Draw synthetic scenarios");
    std::size_t count = 0;
    std::string peak_sampling = "marginal", fanchart_path, kwp_spec;
    int resolution = 15;
    bool midpoint = false;

    auto* gen_ev = generate->add_subcommand("ev", "Charging-session scenarios");
    gen_ev->add_option("--in", in_path, "Canonical session CSV")->required();
    gen_ev->add_option("--n", count, "Scenario count")->required();
    gen_ev->add_option("--peak-sampling", peak_sampling)
        ->check(CLI::IsMember({"marginal", "uniform"}));
    gen_ev->add_flag("--midpoint", midpoint, "Bin midpoints instead of uniform placement");
    gen_ev->add_option("--out", out_path, "Scenario CSV")->required();
    gen_ev->add_option("--fanchart", fanchart_path, "Also write percentile power curves");
    gen_ev->add_option("--resolution", resolution, "Profile grid in minutes");
    gen_ev->add_option("--levels", levels, "Fanchart percentile levels")->delimiter(',');

    auto* gen_pv = generate->add_subcommand("pv", "Plant-day generation scenarios");
    gen_pv->add_option("--in", in_path, "Canonical PV CSV")->required();
    gen_pv->add_option("--month", month, "1..12, or 0 for the whole year");
    gen_pv->add_option("--kwp", kwp_spec, "triangular:min,mode,max or discrete:v=w,...")
        ->required();
    gen_pv->add_option("--n", count, "Scenario count")->required();
    gen_pv->add_option("--out", out_path, "Scenario CSV")->required();

    // ---- export ----------------------------------------------------------
    auto* exp = app.add_subcommand("export", "Re-shape existing outputs");

    auto* exp_fan = exp->add_subcommand("fanchart", "Percentile power curves from scenarios");
    exp_fan->add_option("--in", in_path, "Scenario CSV from 'generate ev'")->required();
    exp_fan->add_option("--out", out_path)->required();
    exp_fan->add_option("--resolution", resolution, "Profile grid in minutes");
    exp_fan->add_option("--levels", levels, "Percentile levels")->delimiter(',');

    auto* exp_table = exp->add_subcommand("pool-summary", "Pool summary table from a compact store");
    exp_table->add_option("--store", store_path)->required();
    exp_table->add_option("--out", out_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        g.seed_set = seed_opt->count() > 0;
        g.finalize();
        const auto meta = g.meta();
        json summary;
        summary["command"] = app.get_subcommands().front()->get_name();

        if (ingest_ev->parsed()) {
            const auto result = enscen::ingest::load_ev_dataset(in_path, g.cfg.ev_schema);
            if (!out_path.empty()) {
                auto out = open_out(out_path);
                enscen::tableio::write_raw_sessions(out, result.records, meta);
            }
            if (!rejects_path.empty()) {
                auto out = open_out(rejects_path);
                out << enscen::tableio::rejection_json(result.rejections).dump(2) << '\n';
            }
            summary["dataset"] = "ev";
            summary["data_rows"] = result.data_rows;
            summary["accepted"] = result.records.size();
            summary["rejected"] = result.rejections.size();
            summary["warnings"] = warnings_json(result.warnings);
        } else if (ingest_pv->parsed()) {
            const auto result = enscen::ingest::load_pv_dataset(in_path, g.cfg.pv_schema);
            if (!out_path.empty()) {
                auto out = open_out(out_path);
                enscen::tableio::write_pv_records(out, result.records, meta);
            }
            if (!rejects_path.empty()) {
                auto out = open_out(rejects_path);
                out << enscen::tableio::rejection_json(result.rejections).dump(2) << '\n';
            }
            summary["dataset"] = "pv";
            summary["data_rows"] = result.data_rows;
            summary["accepted"] = result.records.size();
            summary["rejected"] = result.rejections.size();
            summary["warnings"] = warnings_json(result.warnings);
        } else if (ingest_weather->parsed()) {
            const auto result = enscen::ingest::load_weather(in_path, g.cfg.weather_schema);
            if (!out_path.empty()) {
                auto out = open_out(out_path);
                enscen::tableio::write_weather_records(out, result.records, meta);
            }
            if (!rejects_path.empty()) {
                auto out = open_out(rejects_path);
                out << enscen::tableio::rejection_json(result.rejections).dump(2) << '\n';
            }
            summary["dataset"] = "weather";
            summary["data_rows"] = result.data_rows;
            summary["accepted"] = result.records.size();
            summary["rejected"] = result.rejections.size();
            summary["warnings"] = warnings_json(result.warnings);
        } else if (ingest_load->parsed()) {
            const auto result = enscen::ingest::load_fluvius(in_path, g.cfg.load_schema);
            const auto manifest =
                enscen::ingest::compact_store(result.profiles, out_path, g.cfg.load_schema.year,
                                              g.cfg.load_schema.net_decimals);
            summary["dataset"] = "load";
            summary["data_rows"] = result.data_rows;
            summary["consumers"] = result.profiles.size();
            summary["row_rejections"] = result.row_rejections.size();
            json consumer_rejects = json::array();
            for (const auto& r : result.consumer_rejections)
                consumer_rejects.push_back({{"consumer", r.consumer_id}, {"reason", r.reason}});
            summary["consumer_rejections"] = consumer_rejects;
            summary["store"] = out_path;
            summary["store_bytes"] = fs::file_size(out_path);
            summary["body_crc32"] = manifest.checksum_crc32;
            if (!plain_dump_path.empty()) {
                enscen::ingest::write_plain_dump(result.profiles, plain_dump_path,
                                                 g.cfg.load_schema.year);
                const auto dump_bytes = fs::file_size(plain_dump_path);
                summary["plain_dump_bytes"] = dump_bytes;
                summary["compaction_ratio"] = static_cast<double>(dump_bytes) /
                                              static_cast<double>(fs::file_size(out_path));
            }
        } else if (an_ev->parsed()) {
            const auto result =
                enscen::ingest::load_ev_dataset(in_path, enscen::ingest::Schema::ev_canonical());
            const auto model = enscen::ev::fit_session_model(result.records, g.cfg.session_bins);
            const fs::path dir = g.cfg.out_dir;
            fs::create_directories(dir);
            auto write = [&](const char* name, auto&& writer) {
                auto out = open_out((dir / name).string());
                writer(out);
                summary["outputs"].push_back((dir / name).string());
            };
            write("arrival_hist.csv", [&](std::ostream& os) {
                enscen::tableio::write_histogram(os, model.arrival_pdf, meta);
            });
            write("departure_given_arrival.csv", [&](std::ostream& os) {
                enscen::tableio::write_conditional(os, model.departure_given_arrival, meta);
            });
            write("peak_hist.csv", [&](std::ostream& os) {
                enscen::tableio::write_histogram(os, model.peak_pdf, meta);
            });
            write("energy_given_peak.csv", [&](std::ostream& os) {
                enscen::tableio::write_conditional(os, model.energy_given_peak, meta);
            });
            write("charge_given_conn_peak_energy.csv", [&](std::ostream& os) {
                enscen::tableio::write_joint(os, model.charge_given_conn_peak_energy, meta);
            });
            write("fit_report.json", [&](std::ostream& os) {
                json j = enscen::tableio::fit_report_json(model.report, nullptr);
                j["meta"] = enscen::tableio::meta_json(meta);
                os << j.dump(2) << '\n';
            });
            summary["sessions_used"] = model.report.sessions_used;
        } else if (an_pvq->parsed()) {
            const auto result =
                enscen::ingest::load_pv_dataset(in_path, enscen::ingest::Schema::pv_canonical());
            const auto series =
                enscen::pv::normalize_generation(result.records, g.cfg.pv_schema.year);
            if (levels.empty()) levels = default_quartile_levels();
            const auto table = enscen::pv::monthly_quartiles(series, month, levels);
            auto out = open_out(out_path);
            enscen::tableio::write_quartiles(out, table, meta);
            summary["month"] = month;
            summary["days"] = table.day_count;
            summary["out"] = out_path;
        } else if (an_pvf->parsed()) {
            const auto result =
                enscen::ingest::load_pv_dataset(in_path, enscen::ingest::Schema::pv_canonical());
            const auto report = enscen::pv::forecast_errors(result.records, daylight_only);
            json j = enscen::tableio::forecast_report_json(report);
            j["meta"] = enscen::tableio::meta_json(meta);
            if (!out_path.empty()) {
                auto out = open_out(out_path);
                out << j.dump(2) << '\n';
            }
            summary = j;
            summary["command"] = "analyze pv-forecast";
        } else if (an_meta->parsed()) {
            const auto content = enscen::ingest::read_compact(store_path);
            std::vector<enscen::load::ConsumerMetadata> rows;
            rows.reserve(content.profiles.size());
            for (const auto& p : content.profiles)
                rows.push_back(enscen::load::consumer_metadata(p, content.manifest.year));
            auto out = open_out(out_path);
            enscen::tableio::write_consumer_metadata(out, rows, meta);
            summary["consumers"] = rows.size();
            summary["out"] = out_path;
        } else if (an_peaks->parsed()) {
            const auto content = enscen::ingest::read_compact(store_path);
            std::vector<enscen::load::ConsumerMetadata> rows;
            rows.reserve(content.profiles.size());
            for (const auto& p : content.profiles)
                rows.push_back(enscen::load::consumer_metadata(p, content.manifest.year));
            const auto peak_kind = kind == "peak" ? enscen::load::PeakKind::peak
                                                  : enscen::load::PeakKind::reverse_peak;
            const auto hist = enscen::load::peak_day_distribution(rows, peak_kind,
                                                                  content.manifest.year);
            const auto week = enscen::load::worst_week(hist, window_days);
            auto out = open_out(out_path);
            enscen::tableio::write_day_histogram(out, hist, meta);
            summary["kind"] = kind;
            summary["window_days"] = window_days;
            summary["start_day"] = week.start_day;
            summary["end_day"] = week.end_day;
            summary["count"] = week.count;
            summary["fraction"] = week.fraction;
            summary["out"] = out_path;
        } else if (an_weather->parsed()) {
            const auto result = enscen::ingest::load_weather(
                in_path, enscen::ingest::Schema::weather_canonical());
            const auto colon = week_spec.find(':');
            if (colon == std::string::npos)
                throw enscen::Error("cli", "--week expects start:end day numbers");
            const auto start = enscen::parse_int_field(week_spec.substr(0, colon));
            const auto end = enscen::parse_int_field(week_spec.substr(colon + 1));
            if (!start || !end || *start < 1 || *end < *start)
                throw enscen::Error("cli", "bad --week window: " + week_spec);
            enscen::load::RepresentativeWeek week;
            week.start_day = static_cast<int>(*start);
            week.end_day = static_cast<int>(*end);
            const auto slice = enscen::load::align_weather(result.records, week);
            auto out = open_out(out_path);
            enscen::tableio::write_weather_days(out, slice, meta);
            summary["start_day"] = slice.start_day;
            summary["end_day"] = slice.end_day;
            summary["records"] = slice.records.size();
            summary["out"] = out_path;
        } else if (gen_ev->parsed()) {
            const auto result =
                enscen::ingest::load_ev_dataset(in_path, enscen::ingest::Schema::ev_canonical());
            const auto model = enscen::ev::fit_session_model(result.records, g.cfg.session_bins);
            enscen::ev::GenerateConfig gen_cfg;
            gen_cfg.peak_sampling = peak_sampling == "uniform"
                                        ? enscen::ev::PeakSampling::uniform_bins
                                        : enscen::ev::PeakSampling::marginal;
            gen_cfg.within_bin = midpoint ? enscen::empdist::WithinBin::midpoint
                                          : enscen::empdist::WithinBin::uniform;
            const auto batch =
                enscen::ev::generate_batch(model, count, g.cfg.seed, gen_cfg, g.cfg.threads);
            auto out = open_out(out_path);
            enscen::tableio::write_sessions(out, batch.sessions, meta);
            if (!fanchart_path.empty()) {
                std::vector<enscen::ev::PowerProfile> profiles;
                profiles.reserve(batch.sessions.size());
                for (const auto& s : batch.sessions)
                    profiles.push_back(enscen::ev::synthesize_power_profile(s, resolution));
                if (levels.empty()) levels = default_fanchart_levels();
                const auto chart = enscen::ev::fanchart(profiles, levels);
                auto fan_out = open_out(fanchart_path);
                enscen::tableio::write_fanchart(fan_out, chart, meta);
                summary["fanchart"] = fanchart_path;
            }
            summary["scenarios"] = batch.stats.scenarios;
            summary["attempts"] = batch.stats.attempts;
            summary["joint_misses"] = batch.stats.joint_misses;
            summary["consistency_restarts"] = batch.stats.consistency_restarts;
            summary["consistency_resamples"] = batch.stats.consistency_resamples;
            summary["seed"] = g.cfg.seed;
            summary["out"] = out_path;
        } else if (gen_pv->parsed()) {
            const auto result =
                enscen::ingest::load_pv_dataset(in_path, enscen::ingest::Schema::pv_canonical());
            const auto series =
                enscen::pv::normalize_generation(result.records, g.cfg.pv_schema.year);
            const auto dist = parse_kwp_spec(kwp_spec);
            const auto scenarios =
                enscen::pv::generate_pv_batch(series, month, dist, count, g.cfg.seed);
            auto out = open_out(out_path);
            enscen::tableio::write_pv_scenarios(out, scenarios, meta);
            summary["scenarios"] = scenarios.size();
            summary["month"] = month;
            summary["seed"] = g.cfg.seed;
            summary["mean_kwp"] = dist.mean();
            summary["out"] = out_path;
        } else if (exp_fan->parsed()) {
            std::ifstream in(in_path);
            if (!in) throw enscen::Error("cli", "cannot open input file: " + in_path);
            const auto sessions = enscen::tableio::read_sessions(in);
            if (sessions.empty()) throw enscen::Error("cli", "no scenarios in " + in_path);
            std::vector<enscen::ev::PowerProfile> profiles;
            profiles.reserve(sessions.size());
            for (const auto& s : sessions)
                profiles.push_back(enscen::ev::synthesize_power_profile(s, resolution));
            if (levels.empty()) levels = default_fanchart_levels();
            const auto chart = enscen::ev::fanchart(profiles, levels);
            auto out = open_out(out_path);
            enscen::tableio::write_fanchart(out, chart, meta);
            summary["profiles"] = profiles.size();
            summary["out"] = out_path;
        } else if (exp_table->parsed()) {
            const auto content = enscen::ingest::read_compact(store_path);
            const auto pools =
                enscen::load::derived_pools(content.profiles, content.manifest.year);
            std::vector<enscen::load::PoolSummary> rows;
            for (const auto& pool : pools) {
                if (pool.members.empty()) continue;  // absent types simply drop out
                rows.push_back(enscen::load::pool_summary(pool.members, content.profiles.size(),
                                                          pool.label));
            }
            auto out = open_out(out_path);
            enscen::tableio::write_pool_summaries(out, rows, meta);
            summary["pools"] = rows.size();
            summary["consumers"] = content.profiles.size();
            summary["out"] = out_path;
        }

        print_summary(summary, g.json_output());
        return 0;
    } catch (const enscen::Error& e) {
        std::cerr << "enscen: error module=" << e.module() << " msg=\"" << e.what() << "\"\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "enscen: error module=cli msg=\"" << e.what() << "\"\n";
        return 1;
    }
}
