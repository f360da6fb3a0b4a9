#include "enscen/run_config.hpp"

#include <cstdio>
#include <fstream>

#include "enscen/error.hpp"

namespace enscen {

nlohmann::json bin_spec_to_json(const empdist::BinSpec& spec) {
    return {{"lower_edge", spec.lower_edge},
            {"width", spec.width},
            {"count", spec.count},
            {"unit", std::string(empdist::unit_name(spec.unit))}};
}

empdist::BinSpec bin_spec_from_json(const nlohmann::json& j, const empdist::BinSpec& base) {
    empdist::BinSpec spec = base;
    if (j.contains("lower_edge")) spec.lower_edge = j.at("lower_edge").get<double>();
    if (j.contains("width")) spec.width = j.at("width").get<double>();
    if (j.contains("count")) spec.count = j.at("count").get<std::size_t>();
    if (j.contains("unit")) {
        const auto name = j.at("unit").get<std::string>();
        const auto unit = empdist::unit_from_name(name);
        if (!unit) throw Error("config", "unknown unit: " + name);
        spec.unit = *unit;
    }
    spec.validate();
    return spec;
}

namespace {

nlohmann::json bins_to_json(const ev::SessionBinConfig& bins) {
    return {{"arrival", bin_spec_to_json(bins.arrival)},
            {"departure", bin_spec_to_json(bins.departure)},
            {"connection", bin_spec_to_json(bins.connection)},
            {"charge", bin_spec_to_json(bins.charge)},
            {"peak", bin_spec_to_json(bins.peak)},
            {"energy", bin_spec_to_json(bins.energy)}};
}

ev::SessionBinConfig bins_from_json(const nlohmann::json& j, const ev::SessionBinConfig& base) {
    ev::SessionBinConfig bins = base;
    auto get = [&](const char* key, empdist::BinSpec& spec) {
        if (j.contains(key)) spec = bin_spec_from_json(j.at(key), spec);
    };
    get("arrival", bins.arrival);
    get("departure", bins.departure);
    get("connection", bins.connection);
    get("charge", bins.charge);
    get("peak", bins.peak);
    get("energy", bins.energy);
    return bins;
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["datasets"] = {{"ev", ev_path},
                     {"pv", pv_path},
                     {"load", load_path},
                     {"weather", weather_path}};
    j["schemas"] = {{"ev", ev_schema.to_json()},
                    {"pv", pv_schema.to_json()},
                    {"load", load_schema.to_json()},
                    {"weather", weather_schema.to_json()}};
    j["session_bins"] = bins_to_json(session_bins);
    j["seed"] = seed;
    j["threads"] = threads;
    j["format"] = format;
    j["out_dir"] = out_dir;
    return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig cfg;
    if (j.contains("datasets")) {
        const auto& d = j.at("datasets");
        if (d.contains("ev")) cfg.ev_path = d.at("ev").get<std::string>();
        if (d.contains("pv")) cfg.pv_path = d.at("pv").get<std::string>();
        if (d.contains("load")) cfg.load_path = d.at("load").get<std::string>();
        if (d.contains("weather")) cfg.weather_path = d.at("weather").get<std::string>();
    }
    if (j.contains("schemas")) {
        const auto& s = j.at("schemas");
        if (s.contains("ev")) cfg.ev_schema = ingest::Schema::from_json(s.at("ev"), cfg.ev_schema);
        if (s.contains("pv")) cfg.pv_schema = ingest::Schema::from_json(s.at("pv"), cfg.pv_schema);
        if (s.contains("load"))
            cfg.load_schema = ingest::Schema::from_json(s.at("load"), cfg.load_schema);
        if (s.contains("weather"))
            cfg.weather_schema = ingest::Schema::from_json(s.at("weather"), cfg.weather_schema);
    }
    if (j.contains("session_bins"))
        cfg.session_bins = bins_from_json(j.at("session_bins"), cfg.session_bins);
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<unsigned>();
    if (j.contains("format")) {
        cfg.format = j.at("format").get<std::string>();
        if (cfg.format != "csv" && cfg.format != "json")
            throw Error("config", "format must be csv or json");
    }
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    return cfg;
}

RunConfig RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("config", "cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("config", std::string("config parse failed: ") + e.what());
    }
    try {
        return from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw Error("config", std::string("config field has wrong type: ") + e.what());
    }
}

std::string RunConfig::hash() const {
    const std::string dump = to_json().dump();  // object keys serialize sorted
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace enscen
