#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "enscen/records.hpp"

namespace enscen::ingest {

/// Summary of a written or verified compact store; also serialized to the
/// human-readable manifest sidecar. Layout details live in docs/formats.md.
struct StoreManifest {
    int version = 1;
    std::size_t consumer_count = 0;
    std::size_t intervals_per_consumer = 0;
    int year = 2022;
    int decimals = 3;
    std::uint32_t checksum_crc32 = 0;
    std::uint64_t body_bytes = 0;
    std::map<int, std::size_t> type_counts;
};

/// Writes the single-file binary store plus "<path>.manifest.txt". Profile
/// order is preserved so a read round-trips field-for-field. Values that fit
/// the declared decimal precision are packed as fixed-width integers; any
/// consumer whose values do not reproduce exactly falls back to raw doubles,
/// keeping the round-trip lossless either way.
StoreManifest compact_store(std::span<const load::ConsumerProfile> profiles,
                            const std::string& out_path, int year = 2022, int decimals = 3);

struct StoreContent {
    std::vector<load::ConsumerProfile> profiles;
    StoreManifest manifest;
};

/// Verifies magic, version, and body checksum before decoding; a corrupted
/// byte surfaces as a checksum error.
StoreContent read_compact(const std::string& path);

std::string manifest_path_for(const std::string& store_path);

/// Plain-text dump of the same pool (one line per consumer-interval), the
/// reference point for compaction-ratio checks.
void write_plain_dump(std::span<const load::ConsumerProfile> profiles, const std::string& path,
                      int year = 2022);

std::uint32_t crc32(std::span<const unsigned char> data);

}  // namespace enscen::ingest
