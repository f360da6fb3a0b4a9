#pragma once

#include <cstdint>
#include <string>

#include "enscen/ev_scenario.hpp"
#include "enscen/ingest.hpp"

#include "json.hpp"

namespace enscen {

/// Everything a run needs beyond the command line: dataset locations, the
/// per-provider schemas, bin layout, and reproducibility knobs. Loaded from a
/// JSON file; every field has a usable default so an empty config is valid.
struct RunConfig {
    std::string ev_path;
    std::string pv_path;
    std::string load_path;
    std::string weather_path;

    ingest::Schema ev_schema = ingest::Schema::ev_defaults();
    ingest::Schema pv_schema = ingest::Schema::pv_defaults();
    ingest::Schema load_schema = ingest::Schema::load_defaults();
    ingest::Schema weather_schema = ingest::Schema::weather_defaults();

    ev::SessionBinConfig session_bins;

    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string format = "csv";  // "csv" or "json"
    std::string out_dir = ".";

    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig load_file(const std::string& path);

    /// FNV-1a over the canonical (sorted-key) serialization; stamped into
    /// every output so results can be traced to their exact settings.
    std::string hash() const;
};

nlohmann::json bin_spec_to_json(const empdist::BinSpec& spec);
empdist::BinSpec bin_spec_from_json(const nlohmann::json& j, const empdist::BinSpec& base);

}  // namespace enscen
