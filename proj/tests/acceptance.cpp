// Acceptance gate for the scenario toolkit: one line per criterion, exit
// nonzero when any runnable criterion fails. Criteria 7-10 need the public
// provider datasets and report [SKIP] when the corresponding environment
// variable is unset. All tolerances are pinned here, next to the checks.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "enscen/empdist.hpp"
#include "enscen/error.hpp"
#include "enscen/ev_scenario.hpp"
#include "enscen/ingest.hpp"
#include "enscen/load_analytics.hpp"
#include "enscen/pv_scenario.hpp"
#include "enscen/sampler.hpp"

using namespace enscen;

namespace {

struct Check {
    std::vector<std::string> problems;
    std::size_t checks = 0;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok && problems.size() < 8) problems.push_back(what);
        if (!ok && problems.size() == 8) problems.push_back("...");
    }
    template <class T>
    void equal(const T& got, const T& want, const std::string& what) {
        std::ostringstream os;
        os << what << ": got " << got << ", want " << want;
        expect(got == want, os.str());
    }
    void near(double got, double want, double tol, const std::string& what) {
        std::ostringstream os;
        os << what << ": got " << got << ", want " << want << " +- " << tol;
        expect(std::abs(got - want) <= tol, os.str());
    }
};

// ---------------------------------------------------------------- criterion 1

void sampling_statistics(Check& c) {
    SeededSampler meta(101);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t bins = 2 + static_cast<std::size_t>(meta.next_uniform() * 38.0);
        empdist::BinSpec spec{meta.next_uniform() * 10.0 - 5.0, 0.1 + meta.next_uniform() * 2.0,
                              bins, empdist::Unit::kilowatt};
        const std::size_t n_build = 50 + static_cast<std::size_t>(meta.next_uniform() * 400.0);
        std::vector<double> samples(n_build);
        for (auto& v : samples)
            v = spec.lower_edge + meta.next_uniform() * spec.width * static_cast<double>(bins);
        const empdist::Histogram1D h = empdist::build_histogram(samples, spec);

        double norm = 0.0;
        for (std::size_t i = 0; i < bins; ++i) norm += h.probability(i);
        c.expect(std::abs(norm - 1.0) <= 1e-9, "bin probabilities must sum to 1 within 1e-9");

        const std::size_t n_draw = 100000;
        std::vector<double> freq(bins, 0.0);
        SeededSampler rng(2000 + static_cast<std::uint64_t>(rep));
        for (std::size_t k = 0; k < n_draw; ++k) {
            const std::size_t b = empdist::rws_select_bin(h, rng.next_uniform());
            freq[b] += 1.0 / static_cast<double>(n_draw);
        }
        double l1 = 0.0;
        for (std::size_t i = 0; i < bins; ++i) l1 += std::abs(freq[i] - h.probability(i));
        const double bound = 3.0 * std::sqrt(static_cast<double>(bins) / 100000.0);
        std::ostringstream os;
        os << "empirical frequency L1 " << l1 << " exceeds " << bound << " at rep " << rep;
        c.expect(l1 < bound, os.str());
    }

    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 1 + static_cast<std::size_t>(meta.next_uniform() * 200.0);
        std::vector<double> v(n);
        for (auto& x : v) x = meta.next_uniform() * 100.0 - 50.0;
        double prev = empdist::quantile(v, 0.0);
        bool monotone = true;
        for (int k = 1; k <= 20; ++k) {
            const double q = empdist::quantile(v, static_cast<double>(k) / 20.0);
            if (q < prev) monotone = false;
            prev = q;
        }
        c.expect(monotone, "quantiles must be nondecreasing in q");
    }
}

// ---------------------------------------------------------------- criterion 2

std::vector<ev::ChargingSession> synthetic_session_set(std::uint64_t seed, std::size_t n) {
    SeededSampler rng(seed);
    std::vector<ev::ChargingSession> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ev::ChargingSession s;
        s.arrival_hour = rng.next_uniform() * 24.0;
        s.connection_hours = 0.5 + rng.next_uniform() * 10.0;
        s.departure_hour = std::fmod(s.arrival_hour + s.connection_hours, 24.0);
        s.charge_hours = rng.next_uniform() * std::min(s.connection_hours, 8.0);
        s.peak_kw = 1.0 + rng.next_uniform() * 10.0;
        s.energy_kwh = rng.next_uniform() * s.peak_kw * s.charge_hours;
        out.push_back(s);
    }
    return out;
}

void generated_session_soundness(Check& c) {
    for (int set = 0; set < 20; ++set) {
        const auto corpus = synthetic_session_set(1000 + static_cast<std::uint64_t>(set), 30 + set);
        const ev::SessionModel model = fit_session_model(corpus);
        c.equal(model.report.sessions_used, corpus.size(), "all synthetic sessions must fit");

        const std::uint64_t seed = 7777 + static_cast<std::uint64_t>(set);
        const ev::BatchResult batch = ev::generate_batch(model, 10000, seed, {}, 4);
        std::size_t bad_time = 0, bad_energy = 0, bad_tuple = 0;
        for (const auto& s : batch.sessions) {
            if (!(s.charge_hours <= s.connection_hours)) ++bad_time;
            if (!(s.energy_kwh <= s.peak_kw * s.charge_hours + 1e-6)) ++bad_energy;
            const double key[3] = {s.connection_hours, s.peak_kw, s.energy_kwh};
            const empdist::Histogram1D* cell = model.charge_given_conn_peak_energy.lookup(key);
            if (cell == nullptr) {
                ++bad_tuple;
            } else {
                const auto bin = model.bins.charge.bin_of(s.charge_hours);
                if (!bin || cell->counts[*bin] == 0) ++bad_tuple;
            }
        }
        c.equal<std::size_t>(bad_time, 0, "sessions with charge above connection time");
        c.equal<std::size_t>(bad_energy, 0, "sessions with energy above peak * charge time");
        c.equal<std::size_t>(bad_tuple, 0, "sessions in a bin combination never observed");

        const ev::BatchResult rerun = ev::generate_batch(model, 10000, seed, {}, 1);
        bool identical = rerun.sessions.size() == batch.sessions.size();
        for (std::size_t i = 0; identical && i < batch.sessions.size(); ++i) {
            const auto& a = batch.sessions[i];
            const auto& b = rerun.sessions[i];
            identical = std::bit_cast<std::uint64_t>(a.arrival_hour) ==
                            std::bit_cast<std::uint64_t>(b.arrival_hour) &&
                        std::bit_cast<std::uint64_t>(a.departure_hour) ==
                            std::bit_cast<std::uint64_t>(b.departure_hour) &&
                        std::bit_cast<std::uint64_t>(a.connection_hours) ==
                            std::bit_cast<std::uint64_t>(b.connection_hours) &&
                        std::bit_cast<std::uint64_t>(a.charge_hours) ==
                            std::bit_cast<std::uint64_t>(b.charge_hours) &&
                        std::bit_cast<std::uint64_t>(a.peak_kw) ==
                            std::bit_cast<std::uint64_t>(b.peak_kw) &&
                        std::bit_cast<std::uint64_t>(a.energy_kwh) ==
                            std::bit_cast<std::uint64_t>(b.energy_kwh);
        }
        c.expect(identical, "fixed-seed rerun must reproduce the batch bit for bit");
    }
}

// ---------------------------------------------------------------- criterion 3

void counting_oracle_equivalence(Check& c) {
    // 20 sessions with hand-checkable values; several share bins on purpose.
    const std::vector<ev::ChargingSession> corpus{
        {8.2, 17.1, 8.9, 2.1, 7.2, 11.3},  {8.7, 17.9, 9.2, 2.4, 7.8, 12.1},
        {8.5, 16.2, 7.7, 2.2, 7.5, 11.9},  {9.1, 17.4, 8.3, 3.1, 10.6, 21.0},
        {9.8, 18.6, 8.8, 3.4, 10.1, 20.2}, {13.4, 15.8, 2.4, 1.1, 3.5, 3.2},
        {13.9, 15.1, 1.2, 0.9, 3.1, 2.7},  {18.2, 23.7, 5.5, 2.6, 7.4, 14.8},
        {18.8, 22.4, 3.6, 1.8, 7.1, 12.6}, {19.4, 23.9, 4.5, 2.3, 7.9, 15.5},
        {22.1, 6.3, 8.2, 3.9, 3.6, 9.7},   {23.6, 7.8, 8.2, 4.2, 3.3, 9.1},
        {0.4, 7.2, 6.8, 3.3, 3.7, 8.5},    {7.1, 7.9, 0.8, 0.4, 11.2, 3.0},
        {12.6, 20.3, 7.7, 2.9, 16.8, 38.4},{6.3, 18.9, 12.6, 4.8, 5.4, 19.2},
        {10.2, 11.9, 1.7, 1.4, 21.9, 25.6},{15.5, 19.1, 3.6, 2.0, 7.6, 13.9},
        {8.9, 17.5, 8.6, 2.5, 7.3, 11.1},  {9.3, 16.8, 7.5, 2.8, 10.9, 20.8},
    };
    const ev::SessionBinConfig bins;
    const ev::SessionModel model = fit_session_model(corpus, bins);
    c.equal<std::size_t>(model.report.sessions_used, 20, "corpus must fit in full");

    // independent counting with plain integer arithmetic
    auto bin_of = [](double v, double lo, double w, std::size_t n) -> std::size_t {
        const double x = (v - lo) / w;
        const auto b = static_cast<std::size_t>(x);
        if (v < lo || b >= n) throw Error("acceptance", "oracle value off grid");
        return b;
    };
    std::array<std::uint64_t, 24> arr_counts{};
    std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> dep_counts;
    std::array<std::uint64_t, 23> peak_counts{};
    std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> energy_counts;
    std::map<std::array<std::size_t, 3>, std::map<std::size_t, std::uint64_t>> joint_counts;
    for (const auto& s : corpus) {
        const std::size_t a = bin_of(s.arrival_hour, 0.0, 1.0, 24);
        const std::size_t d = bin_of(s.departure_hour, 0.0, 1.0, 24);
        const std::size_t conn = bin_of(s.connection_hours, 0.0, 0.5, 48);
        const std::size_t chg = bin_of(s.charge_hours, 0.0, 0.5, 48);
        const std::size_t p = bin_of(s.peak_kw, 0.0, 1.0, 23);
        const std::size_t e = bin_of(s.energy_kwh, 0.0, 2.0, 45);
        ++arr_counts[a];
        ++dep_counts[{a, d}];
        ++peak_counts[p];
        ++energy_counts[{p, e}];
        ++joint_counts[{conn, p, e}][chg];
    }

    for (std::size_t i = 0; i < 24; ++i)
        c.equal(model.arrival_pdf.counts[i], arr_counts[i],
                "arrival count in bin " + std::to_string(i));
    std::uint64_t dep_total = 0;
    for (std::size_t a = 0; a < 24; ++a)
        for (std::size_t d = 0; d < 24; ++d) {
            const auto it = dep_counts.find({a, d});
            const std::uint64_t want = it == dep_counts.end() ? 0 : it->second;
            dep_total += model.departure_given_arrival.counts[a][d];
            c.equal(model.departure_given_arrival.counts[a][d], want,
                    "departure count in cell (" + std::to_string(a) + "," + std::to_string(d) + ")");
        }
    c.equal<std::uint64_t>(dep_total, 20, "conditional table total");
    for (std::size_t i = 0; i < 23; ++i)
        c.equal(model.peak_pdf.counts[i], peak_counts[i], "peak count in bin " + std::to_string(i));
    for (std::size_t p = 0; p < 23; ++p)
        for (std::size_t e = 0; e < 45; ++e) {
            const auto it = energy_counts.find({p, e});
            const std::uint64_t want = it == energy_counts.end() ? 0 : it->second;
            c.equal(model.energy_given_peak.counts[p][e], want,
                    "energy count in cell (" + std::to_string(p) + "," + std::to_string(e) + ")");
        }

    c.equal(model.charge_given_conn_peak_energy.cells.size(), joint_counts.size(),
            "distinct joint conditioning tuples");
    for (const auto& [key, charges] : joint_counts) {
        const std::uint32_t k[3] = {static_cast<std::uint32_t>(key[0]),
                                    static_cast<std::uint32_t>(key[1]),
                                    static_cast<std::uint32_t>(key[2])};
        const empdist::Histogram1D* cell = model.charge_given_conn_peak_energy.lookup_bins(k);
        c.expect(cell != nullptr, "joint cell missing from fitted table");
        if (!cell) continue;
        for (std::size_t chg = 0; chg < 48; ++chg) {
            const auto it = charges.find(chg);
            const std::uint64_t want = it == charges.end() ? 0 : it->second;
            c.equal(cell->counts[chg], want, "charge count inside a joint cell");
        }
    }
}

// ---------------------------------------------------------------- criterion 4

void profile_energy_conservation(Check& c) {
    SeededSampler rng(404);
    std::size_t bad_integral = 0, bad_cap = 0;
    for (int i = 0; i < 1000; ++i) {
        ev::ChargingSession s;
        s.arrival_hour = rng.next_uniform() * 24.0;
        s.charge_hours = 0.25 + rng.next_uniform() * 10.0;
        s.connection_hours = s.charge_hours + rng.next_uniform() * 3.0;
        s.departure_hour = std::fmod(s.arrival_hour + s.connection_hours, 24.0);
        s.peak_kw = 1.0 + rng.next_uniform() * 10.0;
        s.energy_kwh = rng.next_uniform() * s.peak_kw * s.charge_hours;

        const ev::PowerProfile p = ev::synthesize_power_profile(s, 15);
        double kwh = 0.0, peak = 0.0;
        for (double kw : p.kw) {
            kwh += kw * 0.25;
            peak = std::max(peak, kw);
        }
        if (std::abs(kwh - s.energy_kwh) > 1e-6) ++bad_integral;
        if (peak > s.peak_kw + 1e-12) ++bad_cap;
    }
    c.equal<std::size_t>(bad_integral, 0, "profiles whose integral misses the energy by > 1e-6");
    c.equal<std::size_t>(bad_cap, 0, "profiles exceeding the session peak");
}

// ---------------------------------------------------------------- criterion 5

void worst_window_oracle(Check& c) {
    SeededSampler rng(505);
    for (int rep = 0; rep < 10; ++rep) {
        load::DayHistogram hist;
        hist.counts.assign(365, 0);
        for (auto& count : hist.counts)
            count = static_cast<std::uint64_t>(rng.next_uniform() * 3.0);
        // planted heavy cluster
        const int cluster_len = 4 + rep % 5;
        const int cluster_start = 1 + static_cast<int>(rng.next_uniform() * (360 - cluster_len));
        for (int d = cluster_start; d < cluster_start + cluster_len; ++d)
            hist.counts[d - 1] += 5 + static_cast<std::uint64_t>(rng.next_uniform() * 10.0);
        for (const auto count : hist.counts) hist.pool_size += count;

        for (int window : {7, 8, 9}) {
            const load::RepresentativeWeek got = load::worst_week(hist, window);
            std::uint64_t best = 0;
            int best_start = 1;
            for (int start = 1; start + window - 1 <= 365; ++start) {
                std::uint64_t sum = 0;
                for (int d = start; d < start + window; ++d) sum += hist.counts[d - 1];
                if (sum > best) {
                    best = sum;
                    best_start = start;
                }
            }
            c.equal(got.count, best, "window count at rep " + std::to_string(rep));
            c.equal(got.start_day, best_start, "window start at rep " + std::to_string(rep));
            c.equal(got.end_day, best_start + window - 1, "window end at rep " + std::to_string(rep));
            const double frac = static_cast<double>(best) / static_cast<double>(hist.pool_size);
            c.near(got.fraction, frac, 1e-12, "window fraction at rep " + std::to_string(rep));
        }
    }
}

// ---------------------------------------------------------------- criterion 6

void metadata_oracle(Check& c) {
    constexpr std::size_t kIntervals = 365 * 96;
    auto interval = [](int doy, double hour) {
        return static_cast<std::size_t>(doy - 1) * 96 + static_cast<std::size_t>(hour * 4.0);
    };
    auto flat = [&](std::string id, int type, double v) {
        return load::ConsumerProfile{std::move(id), type, std::vector<double>(kIntervals, v)};
    };

    // values stay on the 0.25 grid so every hand-computed sum is exact
    auto p1 = flat("H1", 1, 0.25);
    auto p2 = flat("H2", 2, 0.25);
    p2.net_kwh[interval(166, 12.0)] = -0.75;
    p2.net_kwh[interval(341, 17.5)] = 1.25;
    auto p3 = flat("H3", 3, 0.5);
    p3.net_kwh[interval(10, 18.0)] = 4.5;
    auto p4 = flat("H4", 4, 0.25);
    p4.net_kwh[interval(180, 13.25)] = -1.5;
    auto p5 = flat("H5", 5, 0.75);
    p5.net_kwh[interval(341, 17.5)] = 3.0;
    p5.net_kwh[interval(120, 11.0)] = -1.0;

    const load::ConsumerMetadata m1 = load::consumer_metadata(p1, 2022);
    c.equal(m1.annual_net_kwh, 8760.0, "H1 annual net");
    c.equal(m1.peak_kw, 1.0, "H1 peak");
    c.equal<std::size_t>(m1.peak_interval, 0, "H1 peak interval");
    c.equal(m1.reverse_kw, 1.0, "H1 reverse");

    const load::ConsumerMetadata m2 = load::consumer_metadata(p2, 2022);
    c.equal(m2.annual_net_kwh, 8760.0, "H2 annual net");  // +1 and -1 kWh cancel
    c.equal(m2.peak_kw, 5.0, "H2 peak");
    c.equal(m2.peak_hour, 17.5, "H2 peak hour");
    c.equal(m2.peak_day, 341, "H2 peak day");
    c.equal(m2.peak_month, 12, "H2 peak month");
    c.equal(m2.reverse_kw, -3.0, "H2 reverse");
    c.equal(m2.reverse_hour, 12.0, "H2 reverse hour");
    c.equal(m2.reverse_day, 166, "H2 reverse day");
    c.equal(m2.reverse_month, 6, "H2 reverse month");

    const load::ConsumerMetadata m3 = load::consumer_metadata(p3, 2022);
    c.equal(m3.annual_net_kwh, 17524.0, "H3 annual net");
    c.equal(m3.peak_kw, 18.0, "H3 peak");
    c.equal(m3.peak_day, 10, "H3 peak day");
    c.equal(m3.peak_month, 1, "H3 peak month");

    const load::ConsumerMetadata m4 = load::consumer_metadata(p4, 2022);
    c.equal(m4.annual_net_kwh, 8758.25, "H4 annual net");
    c.equal(m4.peak_kw, 1.0, "H4 peak");
    c.equal(m4.reverse_kw, -6.0, "H4 reverse");
    c.equal(m4.reverse_hour, 13.25, "H4 reverse hour");

    const load::ConsumerMetadata m5 = load::consumer_metadata(p5, 2022);
    c.equal(m5.annual_net_kwh, 26280.5, "H5 annual net");
    c.equal(m5.peak_kw, 12.0, "H5 peak");
    c.equal(m5.reverse_kw, -4.0, "H5 reverse");

    const std::vector<load::ConsumerMetadata> pool{m1, m2, m3, m4, m5};
    const load::PoolSummary s = load::pool_summary(pool, 5, "all");
    c.equal<std::size_t>(s.consumer_count, 5, "pool count");
    c.equal(s.probability, 1.0, "pool probability");
    c.equal(s.mean_net_kwh, (8760.0 + 8760.0 + 17524.0 + 8758.25 + 26280.5) / 5.0, "pool mean net");
    c.equal(s.max_net_kwh, 26280.5, "pool max net");
    c.equal(s.min_net_kwh, 8758.25, "pool min net");
    c.equal(s.mean_peak_kw, 7.4, "pool mean peak");
    c.equal(s.mean_reverse_kw, -2.0, "pool mean reverse");
    c.equal(s.mode_peak_hour, 0, "pool modal peak hour");     // hours 0 and 17 tie, lowest wins
    c.equal(s.mean_peak_hour, 10.6, "pool mean peak hour");   // (0 + 17.5 + 18 + 0 + 17.5) / 5
    c.equal(s.mode_peak_month, 1, "pool modal peak month");   // January 3 of 5
    c.equal(s.mode_reverse_hour, 0, "pool modal reverse hour");

    const std::vector<load::ConsumerMetadata> owners{m2, m4, m5};
    const load::PoolSummary sub = load::pool_summary(owners, 5, "owners");
    c.equal(sub.probability, 0.6, "subset probability");
    c.equal(sub.mean_net_kwh, (8760.0 + 8758.25 + 26280.5) / 3.0, "subset mean net");
    c.equal(sub.mean_reverse_kw, (-3.0 - 6.0 - 4.0) / 3.0, "subset mean reverse");
}

// ------------------------------------------------------- criteria 7-10 (data)

const char* kElaadEnv = "ENSCEN_ELAAD_CSV";
const char* kEliaEnv = "ENSCEN_ELIA_CSV";
const char* kFluviusEnv = "ENSCEN_FLUVIUS_CSV";

void observed_low_power_share(Check& c, const std::string& path) {
    ingest::Schema schema = ingest::Schema::ev_defaults();
    schema.reject_threshold = 0.25;  // public exports carry out-of-model sessions
    const auto data = ingest::load_ev_dataset(path, schema);
    const ev::SessionModel model = ev::fit_session_model(data.records);
    const ev::BatchResult batch = ev::generate_batch(model, 10000, 42, {}, 4);
    std::size_t in_region = 0;
    for (const auto& s : batch.sessions)
        if (s.peak_kw < 4.0 && s.energy_kwh < 10.0) ++in_region;
    const double share = static_cast<double>(in_region) / 10000.0;
    std::ostringstream os;
    os << "low-power low-energy share " << share << " must exceed 0.5";
    c.expect(share > 0.5, os.str());
}

void forecast_error_ratios(Check& c, const std::string& path) {
    const auto data = ingest::load_pv_dataset(path, ingest::Schema::pv_defaults());
    const pv::ForecastErrorReport rep = pv::forecast_errors(data.records, false);
    c.near(rep.ratio_week_to_day, 4.4, 0.7, "week-ahead to day-ahead MSE ratio");
    c.near(rep.ratio_day_to_hour, 2.2, 0.4, "day-ahead to hour-ahead MSE ratio");
}

struct ReferenceRow {
    const char* label;
    std::size_t count;
    double mean_net, max_net, min_net, mean_peak, mean_reverse;
};

// Expected aggregates for the reference 1300-consumer pool (analysis year
// 2022). Numeric columns are checked within max(0.5%, half of the last
// printed decimal); counts are exact; the probability column must equal
// count / 1300 (the reference table itself prints an inconsistent value for
// the 100-consumer type-3 row, so probabilities are not compared to it).
const ReferenceRow kReferenceRows[] = {
    {"total", 1300, 2082.8, 18091.0, -6025.8, 7.8, -3.1},
    {"type_1", 300, 2943.4, 9692.2, 443.5, 5.2, 0.03},
    {"type_2", 300, -278.9, 5650.8, -5695.0, 5.93, -3.7},
    {"type_3", 100, 7724.1, 18091.0, 2496.2, 10.46, 0.08},
    {"type_4", 300, 765.0, 11869.6, -6025.8, 7.94, -5.1},
    {"type_5", 300, 3021.1, 13852.8, -3894.8, 11.3, -4.6},
    {"pv_owners", 900, 1169.1, 13852.8, -6025.8, 8.4, -4.5},
    {"ev_owners", 400, 4196.9, 18091.0, -3894.8, 11.1, -3.4},
    {"pv_without_ev", 600, 243.0, 11869.6, -6025.8, 6.9, -4.4},
    {"pv_without_hp", 600, 1371.1, 13852.8, -5694.9, 8.6, -4.1},
};

double half_last_decimal(double printed) {
    // 18091 -> 0.5; 7.8 -> 0.05; 10.46 -> 0.005; 0.03 -> 0.005
    std::ostringstream os;
    os << printed;
    const std::string text = os.str();
    const auto dot = text.find('.');
    const int decimals = dot == std::string::npos ? 0 : static_cast<int>(text.size() - dot - 1);
    return 0.5 * std::pow(10.0, -decimals);
}

double column_tolerance(double printed) {
    return std::max(0.005 * std::abs(printed), half_last_decimal(printed));
}

void pool_summary_table(Check& c, const std::string& path) {
    const auto data = ingest::load_fluvius(path, ingest::Schema::load_defaults());
    const auto pools = load::derived_pools(data.profiles, 2022);
    std::map<std::string, load::PoolSummary> rows;
    const std::size_t total = data.profiles.size();
    for (const auto& pool : pools)
        if (!pool.members.empty())
            rows[pool.label] = load::pool_summary(pool.members, total, pool.label);

    c.equal<std::size_t>(total, 1300, "total consumer count");
    for (const auto& ref : kReferenceRows) {
        const auto it = rows.find(ref.label);
        c.expect(it != rows.end(), std::string("missing pool: ") + ref.label);
        if (it == rows.end()) continue;
        const load::PoolSummary& row = it->second;
        const std::string tag = std::string(ref.label) + " ";
        c.equal(row.consumer_count, ref.count, tag + "count");
        c.near(row.probability, static_cast<double>(ref.count) / 1300.0, 1e-12,
               tag + "probability (count / total)");
        c.near(row.mean_net_kwh, ref.mean_net, column_tolerance(ref.mean_net), tag + "mean net");
        c.near(row.max_net_kwh, ref.max_net, column_tolerance(ref.max_net), tag + "max net");
        c.near(row.min_net_kwh, ref.min_net, column_tolerance(ref.min_net), tag + "min net");
        c.near(row.mean_peak_kw, ref.mean_peak, column_tolerance(ref.mean_peak), tag + "mean peak");
        c.near(row.mean_reverse_kw, ref.mean_reverse, column_tolerance(ref.mean_reverse),
               tag + "mean reverse");
    }
}

void seasonal_peak_windows(Check& c, const std::string& path) {
    const auto data = ingest::load_fluvius(path, ingest::Schema::load_defaults());
    std::vector<load::ConsumerMetadata> pool;
    pool.reserve(data.profiles.size());
    for (const auto& p : data.profiles) pool.push_back(load::consumer_metadata(p, 2022));

    const auto overlap = [](const load::RepresentativeWeek& w, int lo, int hi) {
        return w.start_day <= hi && w.end_day >= lo;
    };

    const auto peak_hist = load::peak_day_distribution(pool, load::PeakKind::peak, 2022);
    const load::RepresentativeWeek peak = load::worst_week(peak_hist, 9);
    {
        std::ostringstream os;
        os << "import-peak window " << peak.start_day << ".." << peak.end_day
           << " must overlap days 347..355";
        c.expect(overlap(peak, 347, 355), os.str());
        std::ostringstream of;
        of << "import-peak fraction " << peak.fraction << " must lie in [0.06, 0.10]";
        c.expect(peak.fraction >= 0.06 && peak.fraction <= 0.10, of.str());
    }

    const auto rev_hist = load::peak_day_distribution(pool, load::PeakKind::reverse_peak, 2022);
    const load::RepresentativeWeek rev = load::worst_week(rev_hist, 9);
    {
        std::ostringstream os;
        os << "export-peak window " << rev.start_day << ".." << rev.end_day
           << " must overlap days 166..168";
        c.expect(overlap(rev, 166, 168), os.str());
        std::ostringstream of;
        of << "export-peak fraction " << rev.fraction << " must lie in [0.09, 0.16]";
        c.expect(rev.fraction >= 0.09 && rev.fraction <= 0.16, of.str());
    }
}

// -------------------------------------------------------------------- runner

struct Criterion {
    int id;
    const char* title;
    const char* env;  // dataset gate; nullptr = always runnable
    std::function<void(Check&, const std::string&)> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "binned sampling statistics", nullptr,
         [](Check& c, const std::string&) { sampling_statistics(c); }},
        {2, "generated session soundness", nullptr,
         [](Check& c, const std::string&) { generated_session_soundness(c); }},
        {3, "counting oracle equivalence", nullptr,
         [](Check& c, const std::string&) { counting_oracle_equivalence(c); }},
        {4, "power profile energy conservation", nullptr,
         [](Check& c, const std::string&) { profile_energy_conservation(c); }},
        {5, "worst-window search oracle", nullptr,
         [](Check& c, const std::string&) { worst_window_oracle(c); }},
        {6, "consumer metadata oracle", nullptr,
         [](Check& c, const std::string&) { metadata_oracle(c); }},
        {7, "generated low-power session share", kElaadEnv, observed_low_power_share},
        {8, "forecast error ratios", kEliaEnv, forecast_error_ratios},
        {9, "consumer pool summary table", kFluviusEnv, pool_summary_table},
        {10, "seasonal peak windows", kFluviusEnv, seasonal_peak_windows},
    };

    int failed = 0, skipped = 0;
    for (const auto& criterion : criteria) {
        std::string arg;
        if (criterion.env != nullptr) {
            const char* value = std::getenv(criterion.env);
            if (value == nullptr || *value == '\0') {
                ++skipped;
                std::cout << "[SKIP] criterion " << criterion.id << ": " << criterion.title
                          << " (requires-data; set " << criterion.env << ")\n";
                continue;
            }
            arg = value;
        }
        Check c;
        try {
            criterion.run(c, arg);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        if (c.problems.empty()) {
            std::cout << "[PASS] criterion " << criterion.id << ": " << criterion.title << " ("
                      << c.checks << " checks)\n";
        } else {
            ++failed;
            std::cout << "[FAIL] criterion " << criterion.id << ": " << criterion.title << "\n";
            for (const auto& p : c.problems) std::cout << "       - " << p << "\n";
        }
    }
    std::cout << (failed == 0 ? "acceptance: all runnable criteria passed"
                              : "acceptance: FAILURES present")
              << " (skipped " << skipped << " of " << criteria.size() << ")\n";
    return failed == 0 ? 0 : 1;
}
