#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "enscen/error.hpp"
#include "enscen/ev_scenario.hpp"
#include "enscen/sampler.hpp"

using namespace enscen;
using namespace enscen::ev;

namespace {

ChargingSession session(double arr, double dep, double conn, double chg, double peak, double en) {
    return {arr, dep, conn, chg, peak, en};
}

/// A corpus whose five quantities all sit strictly inside their default bins.
std::vector<ChargingSession> office_fleet() {
    std::vector<ChargingSession> s;
    for (int i = 0; i < 10; ++i) {
        // morning arrivals, ~9 h connections, mid-power charging
        s.push_back(session(8.25 + 0.05 * i, 17.5, 9.25 - 0.05 * i, 2.4, 7.2, 11.0 + 0.2 * i));
        // evening arrivals, overnight-style short charge
        s.push_back(session(18.5, 22.75, 4.25, 1.2, 3.6, 4.0 + 0.1 * i));
    }
    return s;
}

}  // namespace

TEST_CASE("raw records map onto clock coordinates") {
    ingest::RawSessionRecord rec;
    rec.session_id = "S";
    rec.arrival = {2022, 3, 4, 21, 30, 0};
    rec.departure = {2022, 3, 5, 6, 45, 0};
    rec.connection_hours = 9.0;  // provider-rounded column, intentionally off
    rec.charge_hours = 2.5;
    rec.peak_kw = 7.4;
    rec.energy_kwh = 15.0;

    const ChargingSession s = to_session(rec);
    CHECK(s.arrival_hour == doctest::Approx(21.5));
    CHECK(s.departure_hour == doctest::Approx(6.75));
    CHECK(s.connection_hours == doctest::Approx(9.25));  // elapsed, not the column
    CHECK(s.charge_hours == doctest::Approx(2.5));
    CHECK(s.energy_kwh == doctest::Approx(15.0));
}

TEST_CASE("fit counts exactly what the filter drops") {
    auto s = office_fleet();
    s.push_back(session(8.0, 17.0, 9.0, 9.5, 7.2, 11.0));    // charge > connection
    s.push_back(session(8.0, 17.0, 60.0, 2.0, 7.2, 11.0));   // connection off the grid
    s.push_back(session(8.0, 17.0, 9.0, 2.0, 30.0, 11.0));   // peak off the grid
    const SessionModel m = fit_session_model(s);

    CHECK(m.report.sessions_used == 20);
    CHECK(m.report.skipped_inconsistent == 1);
    CHECK(m.report.skipped_out_of_range == 2);
    CHECK(m.arrival_pdf.total == 20);
    CHECK(m.peak_pdf.total == 20);
    // two distinct arrival hours -> exactly two populated rows
    CHECK(m.departure_given_arrival.row_totals[8] == 10);
    CHECK(m.departure_given_arrival.row_totals[18] == 10);
    CHECK(m.report.empty_departure_rows == 22);
    CHECK(m.report.joint_cells == m.charge_given_conn_peak_energy.cells.size());
    CHECK(m.report.joint_cells > 0);

    SUBCASE("an all-rejected corpus refuses to fit") {
        std::vector<ChargingSession> bad{session(8.0, 17.0, 9.0, 9.5, 7.2, 11.0)};
        CHECK_THROWS_WITH_AS(fit_session_model(bad), doctest::Contains("no usable sessions"),
                             Error);
    }
}

TEST_CASE("a single-session model reproduces that session's bins") {
    const auto only = session(13.2, 15.9, 2.2, 1.3, 10.6, 7.1);
    const std::vector<ChargingSession> one{only};
    const SessionModel m = fit_session_model(one);

    SeededSampler rng(99);
    GenerateConfig cfg;
    AttemptStats stats;
    for (int i = 0; i < 50; ++i) {
        const ChargingSession g = generate_session(m, rng, cfg, &stats);
        CHECK(g.arrival_hour >= 13.0);
        CHECK(g.arrival_hour < 14.0);
        CHECK(g.departure_hour >= 15.0);
        CHECK(g.departure_hour < 16.0);
        CHECK(g.peak_kw >= 10.0);
        CHECK(g.peak_kw < 11.0);
        CHECK(g.energy_kwh >= 6.0);
        CHECK(g.energy_kwh < 8.0);
        CHECK(g.charge_hours >= 1.0);
        CHECK(g.charge_hours < 1.5);
        // connection is derived, not drawn: wrap-around of the clock difference
        CHECK(g.connection_hours ==
              doctest::Approx(std::fmod(g.departure_hour - g.arrival_hour + 24.0, 24.0)));
        CHECK(g.charge_hours <= g.connection_hours);
        CHECK(g.energy_kwh <= g.peak_kw * g.charge_hours + 1e-6);
    }
    CHECK(stats.scenarios == 50);

    SUBCASE("midpoint placement is fully deterministic") {
        GenerateConfig mid;
        mid.within_bin = empdist::WithinBin::midpoint;
        SeededSampler r1(1), r2(2);
        const ChargingSession a = generate_session(m, r1, mid);
        const ChargingSession b = generate_session(m, r2, mid);
        CHECK(a.arrival_hour == 13.5);
        CHECK(a.departure_hour == 15.5);
        CHECK(a.peak_kw == 10.5);
        CHECK(a.energy_kwh == 7.0);
        CHECK(a.charge_hours == 1.25);
        CHECK(b.arrival_hour == a.arrival_hour);
        CHECK(b.charge_hours == a.charge_hours);
    }
}

TEST_CASE("unseen duration-power-energy combinations restart the draw") {
    // Two disjoint clusters: mixing cluster A's connection with cluster B's
    // peak lands in a charge-time cell that was never observed.
    std::vector<ChargingSession> s;
    for (int i = 0; i < 8; ++i) {
        s.push_back(session(8.1, 10.2, 2.1, 1.9, 3.4, 5.1));
        s.push_back(session(20.3, 23.4, 3.1, 2.2, 10.7, 21.3));
    }
    const SessionModel m = fit_session_model(s);
    REQUIRE(m.charge_given_conn_peak_energy.cells.size() == 2);

    SeededSampler rng(7);
    AttemptStats stats;
    GenerateConfig cfg;
    for (int i = 0; i < 200; ++i) {
        const ChargingSession g = generate_session(m, rng, cfg, &stats);
        const bool cluster_a = g.peak_kw < 4.0;
        // the surviving draw is always a coherent cluster, never a mix
        CHECK(g.connection_hours >= (cluster_a ? 2.0 : 3.0));
        CHECK(g.connection_hours < (cluster_a ? 2.5 : 3.5));
        CHECK(g.energy_kwh >= (cluster_a ? 4.0 : 20.0));
    }
    CHECK(stats.scenarios == 200);
    CHECK(stats.attempts > stats.scenarios);  // cross-cluster draws had to restart
    CHECK(stats.joint_misses > 0);

    SUBCASE("a model with no reachable consistent draw gives up loudly") {
        // one observed session whose charge bin lies above its connection bin;
        // with midpoint placement (budget 0) no redraw can rescue an attempt
        std::vector<ChargingSession> trap{session(8.0, 9.6, 1.2, 0.9, 1.1, 0.5)};
        SessionModel tm = fit_session_model(trap);
        // sabotage: shift every observed charge-time count into a higher bin
        auto cell = tm.charge_given_conn_peak_energy.cells.begin();
        REQUIRE(cell != tm.charge_given_conn_peak_energy.cells.end());
        auto& counts = cell->second.counts;
        counts.assign(counts.size(), 0);
        counts[40] = 1;  // 20..20.5 h of charging inside a <1 h connection
        GenerateConfig strict;
        strict.within_bin = empdist::WithinBin::midpoint;
        strict.max_attempts = 25;
        SeededSampler r(3);
        AttemptStats st;
        CHECK_THROWS_WITH_AS(generate_session(tm, r, strict, &st),
                             doctest::Contains("no consistent scenario after 25 attempts"), Error);
        CHECK(st.consistency_restarts >= 25);
    }
}

TEST_CASE("uniform-bin peak sampling spreads over observed bins only") {
    // peak bins 3 and 10 observed at 90/10; uniform mode should pick ~50/50
    std::vector<ChargingSession> s;
    for (int i = 0; i < 18; ++i) s.push_back(session(9.1, 14.2, 5.1, 2.0, 3.5, 6.3));
    for (int i = 0; i < 2; ++i) s.push_back(session(9.1, 14.2, 5.1, 2.0, 10.5, 6.3));
    const SessionModel m = fit_session_model(s);

    GenerateConfig cfg;
    cfg.peak_sampling = PeakSampling::uniform_bins;
    SeededSampler rng(11);
    int high = 0;
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
        const ChargingSession g = generate_session(m, rng, cfg);
        const bool is_high = g.peak_kw >= 10.0;
        if (is_high) ++high;
        CHECK((g.peak_kw < 4.0 || is_high));  // never an unobserved bin
    }
    CHECK(static_cast<double>(high) / n == doctest::Approx(0.5).epsilon(0.06));

    SUBCASE("marginal sampling keeps the empirical 90/10 split") {
        GenerateConfig marg;
        SeededSampler r2(12);
        int high2 = 0;
        for (int i = 0; i < n; ++i)
            if (generate_session(m, r2, marg).peak_kw >= 10.0) ++high2;
        CHECK(static_cast<double>(high2) / n == doctest::Approx(0.1).epsilon(0.35));
    }
}

TEST_CASE("batches are deterministic and thread-count invariant") {
    const auto s = office_fleet();
    const SessionModel m = fit_session_model(s);

    const BatchResult a = generate_batch(m, 64, 2024, {}, 1);
    const BatchResult b = generate_batch(m, 64, 2024, {}, 4);
    REQUIRE(a.sessions.size() == 64);
    REQUIRE(b.sessions.size() == 64);
    for (std::size_t i = 0; i < 64; ++i) {
        CHECK(a.sessions[i].arrival_hour == b.sessions[i].arrival_hour);  // bitwise
        CHECK(a.sessions[i].energy_kwh == b.sessions[i].energy_kwh);
    }
    CHECK(a.stats.scenarios == 64);
    CHECK(a.stats.attempts == b.stats.attempts);

    SUBCASE("a different seed moves the batch") {
        const BatchResult c = generate_batch(m, 64, 2025, {}, 1);
        bool any_differ = false;
        for (std::size_t i = 0; i < 64; ++i)
            if (c.sessions[i].arrival_hour != a.sessions[i].arrival_hour) any_differ = true;
        CHECK(any_differ);
    }
    SUBCASE("zero scenarios is a caller error") {
        CHECK_THROWS_AS(generate_batch(m, 0, 1), Error);
    }
}

TEST_CASE("generated marginals track the fitted arrival distribution") {
    // Restarts after an unseen bin combination re-draw the arrival, which
    // tilts the accepted sample toward arrivals whose chain succeeds more
    // often. This corpus covers every reachable combination (one shared
    // peak/energy/charge bin, all connection bins that the two
    // arrival/departure windows can produce), so no attempt ever restarts
    // and the generated arrivals must reproduce the fitted split.
    std::vector<ChargingSession> s;
    const double day_pairs[10][2] = {{8.1, 17.9}, {8.9, 17.1}, {8.4, 17.6}, {8.6, 17.4},
                                     {8.2, 17.8}, {8.8, 17.2}, {8.3, 17.7}, {8.7, 17.3},
                                     {8.45, 17.55}, {8.55, 17.45}};
    const double night_pairs[10][2] = {{18.1, 22.9}, {18.9, 22.1}, {18.4, 22.6}, {18.6, 22.4},
                                       {18.2, 22.8}, {18.8, 22.2}, {18.3, 22.7}, {18.7, 22.3},
                                       {18.45, 22.55}, {18.55, 22.45}};
    for (const auto& p : day_pairs) s.push_back(session(p[0], p[1], p[1] - p[0], 2.1, 7.2, 7.2));
    for (const auto& p : night_pairs) s.push_back(session(p[0], p[1], p[1] - p[0], 2.1, 7.2, 7.2));
    const SessionModel m = fit_session_model(s);
    const std::size_t n = 10000;
    const BatchResult batch = generate_batch(m, n, 7, {}, 4);
    CHECK(batch.stats.attempts == batch.stats.scenarios);  // no restarts by construction

    std::vector<double> freq(24, 0.0);
    for (const auto& g : batch.sessions) {
        auto bin = m.bins.arrival.bin_of(g.arrival_hour);
        REQUIRE(bin.has_value());
        freq[*bin] += 1.0 / static_cast<double>(n);
    }
    double l1 = 0.0;
    for (std::size_t i = 0; i < 24; ++i)
        l1 += std::abs(freq[i] - m.arrival_pdf.probability(i));
    CHECK(l1 < 0.05);
}

TEST_CASE("charging profiles hold average power over the charge span") {
    const ChargingSession s = session(8.0, 17.0, 9.0, 2.0, 7.4, 10.0);
    const PowerProfile p = synthesize_power_profile(s, 15);
    REQUIRE(p.kw.size() == 2 * 96);
    // 5 kW from 08:00 for two hours
    for (int k = 0; k < 32; ++k) CHECK(p.kw[k] == doctest::Approx(0.0));
    for (int k = 32; k < 40; ++k) CHECK(p.kw[k] == doctest::Approx(5.0));
    for (std::size_t k = 40; k < p.kw.size(); ++k) CHECK(p.kw[k] == doctest::Approx(0.0));

    SUBCASE("the profile conserves the session energy") {
        double kwh = 0.0;
        for (double kw : p.kw) kwh += kw * 0.25;
        CHECK(kwh == doctest::Approx(10.0).epsilon(1e-9));
    }
    SUBCASE("partially covered slots are prorated") {
        // 07:50 arrival: the 07:45 slot carries 10 of 15 minutes
        const ChargingSession frac = session(7.0 + 50.0 / 60.0, 12.0, 4.0 + 10.0 / 60.0, 1.0, 6.0, 6.0);
        const PowerProfile q = synthesize_power_profile(frac, 15);
        CHECK(q.kw[31] == doctest::Approx(6.0 * 10.0 / 15.0));
        CHECK(q.kw[32] == doctest::Approx(6.0));
        double kwh = 0.0;
        for (double kw : q.kw) kwh += kw * 0.25;
        CHECK(kwh == doctest::Approx(6.0));
    }
    SUBCASE("sessions crossing midnight keep their tail on day two") {
        const ChargingSession late = session(23.5, 3.5, 4.0, 1.0, 8.0, 8.0);
        const PowerProfile q = synthesize_power_profile(late, 15);
        for (int k = 94; k < 98; ++k) CHECK(q.kw[k] == doctest::Approx(8.0));
        CHECK(q.kw[93] == doctest::Approx(0.0));
        CHECK(q.kw[98] == doctest::Approx(0.0));
    }
    SUBCASE("average power is capped at the session peak") {
        // 10 kWh in 30 min would need 20 kW; the cap holds it at 3.6
        const ChargingSession hot = session(10.0, 12.0, 2.0, 0.5, 3.6, 10.0);
        const PowerProfile q = synthesize_power_profile(hot, 15);
        for (double kw : q.kw) CHECK(kw <= 3.6 + 1e-12);
    }
    SUBCASE("degenerate inputs are rejected") {
        CHECK_THROWS_WITH_AS(synthesize_power_profile(s, 7),
                             doctest::Contains("divisor of 1440"), Error);
        const ChargingSession zero = session(8.0, 9.0, 1.0, 0.0, 3.6, 5.0);
        CHECK_THROWS_WITH_AS(synthesize_power_profile(zero, 15),
                             doctest::Contains("zero charge duration"), Error);
        const ChargingSession idle = session(8.0, 9.0, 1.0, 0.0, 3.6, 0.0);
        const PowerProfile q = synthesize_power_profile(idle, 15);
        for (double kw : q.kw) CHECK(kw == 0.0);
    }
    SUBCASE("hourly resolution shrinks the axis") {
        const PowerProfile q = synthesize_power_profile(s, 60);
        CHECK(q.kw.size() == 48);
        CHECK(q.kw[8] == doctest::Approx(5.0));
    }
}

TEST_CASE("fanchart percentiles interpolate across profiles per slot") {
    PowerProfile lo{15, std::vector<double>(192, 0.0)};
    PowerProfile hi{15, std::vector<double>(192, 10.0)};
    const std::vector<PowerProfile> profiles{lo, hi};
    const std::vector<int> levels{5, 50, 95};
    const FanchartTable f = fanchart(profiles, levels);
    REQUIRE(f.kw.size() == 3);
    CHECK(f.kw[0][17] == doctest::Approx(0.5));
    CHECK(f.kw[1][17] == doctest::Approx(5.0));
    CHECK(f.kw[2][17] == doctest::Approx(9.5));

    SUBCASE("input validation") {
        CHECK_THROWS_AS(fanchart(std::vector<PowerProfile>{}, levels), Error);
        CHECK_THROWS_AS(fanchart(profiles, std::vector<int>{}), Error);
        CHECK_THROWS_AS(fanchart(profiles, std::vector<int>{101}), Error);
        PowerProfile other{30, std::vector<double>(96, 1.0)};
        const std::vector<PowerProfile> mixed{lo, other};
        CHECK_THROWS_WITH_AS(fanchart(mixed, levels), doctest::Contains("mixed grids"), Error);
    }
}
