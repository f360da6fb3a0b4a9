#include "enscen/compact_store.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "enscen/error.hpp"
#include "enscen/ingest.hpp"

namespace enscen::ingest {

namespace {

constexpr char kMagic[4] = {'E', 'S', 'C', 'L'};
constexpr std::uint8_t kFormatVersion = 1;
constexpr std::size_t kHeaderBytes = 32;

// Per-consumer value encodings. Integer modes store round_decimal quanta;
// raw mode keeps the doubles verbatim for values the quanta cannot reproduce.
enum Mode : std::uint8_t { kInt16 = 0, kInt32 = 1, kRaw64 = 2 };

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
    out.push_back(static_cast<unsigned char>(v & 0xff));
    out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

struct Cursor {
    const unsigned char* p;
    std::size_t left;

    void need(std::size_t n) const {
        if (left < n) throw Error("ingest", "truncated store body");
    }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = static_cast<std::uint16_t>(p[0] | (p[1] << 8));
        p += 2;
        left -= 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
        p += 4;
        left -= 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
        p += 8;
        left -= 8;
        return v;
    }
    std::uint8_t u8() {
        need(1);
        std::uint8_t v = *p;
        ++p;
        --left;
        return v;
    }
    std::string str(std::size_t n) {
        need(n);
        std::string s(reinterpret_cast<const char*>(p), n);
        p += n;
        left -= n;
        return s;
    }
};

double pow10i(int decimals) {
    double s = 1.0;
    for (int i = 0; i < decimals; ++i) s *= 10.0;
    return s;
}

std::string hex32(std::uint32_t v) {
    char buf[11];
    std::snprintf(buf, sizeof buf, "0x%08x", v);
    return buf;
}

void write_manifest_file(const StoreManifest& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("ingest", "cannot open manifest for writing: " + path);
    out << "format: enscen compact load store\n";
    out << "version: " << m.version << '\n';
    out << "consumers: " << m.consumer_count << '\n';
    out << "intervals_per_consumer: " << m.intervals_per_consumer << '\n';
    out << "year: " << m.year << '\n';
    out << "decimals: " << m.decimals << '\n';
    out << "body_bytes: " << m.body_bytes << '\n';
    out << "crc32: " << hex32(m.checksum_crc32) << '\n';
    for (const auto& [type, count] : m.type_counts)
        out << "type_" << type << ": " << count << '\n';
}

}  // namespace

std::uint32_t crc32(std::span<const unsigned char> data) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t c = 0xFFFFFFFFu;
    for (unsigned char b : data) c = table[(c ^ b) & 0xff] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

std::string manifest_path_for(const std::string& store_path) {
    return store_path + ".manifest.txt";
}

StoreManifest compact_store(std::span<const load::ConsumerProfile> profiles,
                            const std::string& out_path, int year, int decimals) {
    if (decimals < 0 || decimals > 9)
        throw Error("ingest", "store decimals must be in [0, 9]");
    const std::size_t intervals = profiles.empty() ? 0 : profiles.front().net_kwh.size();
    for (const auto& p : profiles)
        if (p.net_kwh.size() != intervals)
            throw Error("ingest", "profiles have differing interval counts");
    if (!profiles.empty() && intervals == 0)
        throw Error("ingest", "refusing to store empty profiles");

    const double scale = pow10i(decimals);
    std::vector<unsigned char> body;
    body.reserve(profiles.size() * (intervals * 2 + 24));

    StoreManifest manifest;
    manifest.consumer_count = profiles.size();
    manifest.intervals_per_consumer = intervals;
    manifest.year = year;
    manifest.decimals = decimals;

    std::vector<long long> quanta(intervals);
    for (const auto& p : profiles) {
        if (p.id.size() > 0xFFFF) throw Error("ingest", "consumer id too long: " + p.id);
        if (p.type < 0 || p.type > 255)
            throw Error("ingest", "consumer type out of byte range: " + p.id);
        ++manifest.type_counts[p.type];

        Mode mode = kInt16;
        bool exact = true;
        bool fits16 = true;
        bool fits32 = true;
        for (std::size_t i = 0; i < intervals; ++i) {
            const double v = p.net_kwh[i];
            const long long q = std::llround(v * scale);
            if (static_cast<double>(q) / scale != v) {
                exact = false;
                break;
            }
            quanta[i] = q;
            if (q < -32768 || q > 32767) fits16 = false;
            if (q < INT32_MIN || q > INT32_MAX) fits32 = false;
        }
        if (!exact) mode = kRaw64;
        else if (fits16) mode = kInt16;
        else if (fits32) mode = kInt32;
        else mode = kRaw64;

        put_u16(body, static_cast<std::uint16_t>(p.id.size()));
        body.insert(body.end(), p.id.begin(), p.id.end());
        body.push_back(static_cast<unsigned char>(p.type));
        body.push_back(static_cast<unsigned char>(mode));
        switch (mode) {
            case kInt16:
                for (std::size_t i = 0; i < intervals; ++i)
                    put_u16(body, static_cast<std::uint16_t>(static_cast<std::int16_t>(quanta[i])));
                break;
            case kInt32:
                for (std::size_t i = 0; i < intervals; ++i)
                    put_u32(body, static_cast<std::uint32_t>(static_cast<std::int32_t>(quanta[i])));
                break;
            case kRaw64:
                for (double v : p.net_kwh) put_u64(body, std::bit_cast<std::uint64_t>(v));
                break;
        }
    }

    manifest.body_bytes = body.size();
    manifest.checksum_crc32 = crc32(body);

    std::vector<unsigned char> header;
    header.reserve(kHeaderBytes);
    header.insert(header.end(), kMagic, kMagic + 4);
    header.push_back(kFormatVersion);
    header.push_back(0);  // flags, reserved
    put_u16(header, static_cast<std::uint16_t>(year));
    put_u32(header, static_cast<std::uint32_t>(profiles.size()));
    put_u32(header, static_cast<std::uint32_t>(intervals));
    header.push_back(static_cast<unsigned char>(decimals));
    header.push_back(0);
    header.push_back(0);
    header.push_back(0);
    put_u32(header, manifest.checksum_crc32);
    put_u64(header, manifest.body_bytes);

    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("ingest", "cannot open store for writing: " + out_path);
    out.write(reinterpret_cast<const char*>(header.data()),
              static_cast<std::streamsize>(header.size()));
    out.write(reinterpret_cast<const char*>(body.data()), static_cast<std::streamsize>(body.size()));
    out.flush();
    if (!out) throw Error("ingest", "write failed: " + out_path);

    write_manifest_file(manifest, manifest_path_for(out_path));
    return manifest;
}

StoreContent read_compact(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("ingest", "cannot open store: " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < kHeaderBytes) throw Error("ingest", "store too short: " + path);

    Cursor h{bytes.data(), kHeaderBytes};
    const std::string magic = h.str(4);
    if (magic != std::string(kMagic, 4)) throw Error("ingest", "bad store magic: " + path);
    const std::uint8_t version = h.u8();
    if (version != kFormatVersion) {
        std::ostringstream os;
        os << "unsupported store version " << int(version);
        throw Error("ingest", os.str());
    }
    h.u8();  // flags
    const int year = h.u16();
    const std::uint32_t consumer_count = h.u32();
    const std::uint32_t intervals = h.u32();
    const int decimals = h.u8();
    h.u8();
    h.u8();
    h.u8();
    const std::uint32_t expected_crc = h.u32();
    const std::uint64_t body_size = h.u64();

    if (bytes.size() - kHeaderBytes != body_size)
        throw Error("ingest", "store body size mismatch: " + path);
    const std::span<const unsigned char> body(bytes.data() + kHeaderBytes, body_size);
    const std::uint32_t actual_crc = crc32(body);
    if (actual_crc != expected_crc)
        throw Error("ingest", "checksum mismatch: expected " + hex32(expected_crc) + ", got " +
                                  hex32(actual_crc));

    const double scale = pow10i(decimals);
    StoreContent content;
    content.manifest.version = version;
    content.manifest.consumer_count = consumer_count;
    content.manifest.intervals_per_consumer = intervals;
    content.manifest.year = year;
    content.manifest.decimals = decimals;
    content.manifest.checksum_crc32 = expected_crc;
    content.manifest.body_bytes = body_size;

    Cursor c{body.data(), body.size()};
    content.profiles.reserve(consumer_count);
    for (std::uint32_t k = 0; k < consumer_count; ++k) {
        load::ConsumerProfile p;
        const std::uint16_t id_len = c.u16();
        p.id = c.str(id_len);
        p.type = c.u8();
        const std::uint8_t mode = c.u8();
        p.net_kwh.resize(intervals);
        switch (mode) {
            case kInt16:
                for (std::uint32_t i = 0; i < intervals; ++i)
                    p.net_kwh[i] =
                        static_cast<double>(static_cast<std::int16_t>(c.u16())) / scale;
                break;
            case kInt32:
                for (std::uint32_t i = 0; i < intervals; ++i)
                    p.net_kwh[i] =
                        static_cast<double>(static_cast<std::int32_t>(c.u32())) / scale;
                break;
            case kRaw64:
                for (std::uint32_t i = 0; i < intervals; ++i)
                    p.net_kwh[i] = std::bit_cast<double>(c.u64());
                break;
            default:
                throw Error("ingest", "unknown consumer encoding mode");
        }
        ++content.manifest.type_counts[p.type];
        content.profiles.push_back(std::move(p));
    }
    if (c.left != 0) throw Error("ingest", "trailing bytes after last consumer");
    return content;
}

void write_plain_dump(std::span<const load::ConsumerProfile> profiles, const std::string& path,
                      int year) {
    std::ofstream out(path);
    if (!out) throw Error("ingest", "cannot open dump for writing: " + path);
    out << "consumer_id;consumer_type;interval_start;net_kwh\n";
    char line[64];
    for (const auto& p : profiles) {
        for (std::size_t i = 0; i < p.net_kwh.size(); ++i) {
            const int doy = static_cast<int>(i / 96) + 1;
            const int q = static_cast<int>(i % 96);
            const int month = month_from_day_of_year(year, doy);
            int day = doy;
            for (int m = 1; m < month; ++m) day -= days_in_month(year, m);
            std::snprintf(line, sizeof line, ";%d;%04d-%02d-%02d %02d:%02d:00;%.3f\n", p.type,
                          year, month, day, q / 4, (q % 4) * 15, p.net_kwh[i]);
            out << p.id << line;
        }
    }
}

}  // namespace enscen::ingest
