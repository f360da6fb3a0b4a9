#include "enscen/ev_scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "enscen/calendar.hpp"
#include "enscen/error.hpp"

namespace enscen::ev {

namespace {

constexpr double kChargeSlackHours = 0.01;  // provider rounding tolerance at fit
constexpr double kEnergySlackKwh = 1e-6;    // numeric slack in the power-balance check

bool in_range(const empdist::BinSpec& spec, double v) { return spec.bin_of(v).has_value(); }

}  // namespace

ChargingSession to_session(const ingest::RawSessionRecord& rec) {
    ChargingSession s;
    s.arrival_hour = hour_of_day(rec.arrival);
    s.departure_hour = hour_of_day(rec.departure);
    s.connection_hours = static_cast<double>(minutes_since_epoch(rec.departure) -
                                             minutes_since_epoch(rec.arrival)) /
                         60.0;
    s.charge_hours = rec.charge_hours;
    s.peak_kw = rec.peak_kw;
    s.energy_kwh = rec.energy_kwh;
    return s;
}

void SessionBinConfig::validate() const {
    arrival.validate();
    departure.validate();
    connection.validate();
    charge.validate();
    peak.validate();
    energy.validate();
}

void AttemptStats::merge(const AttemptStats& other) {
    scenarios += other.scenarios;
    attempts += other.attempts;
    joint_misses += other.joint_misses;
    consistency_restarts += other.consistency_restarts;
    consistency_resamples += other.consistency_resamples;
}

SessionModel fit_session_model(std::span<const ChargingSession> sessions,
                               const SessionBinConfig& bins) {
    bins.validate();

    std::vector<double> arrivals;
    std::vector<std::pair<double, double>> dep_by_arrival;
    std::vector<double> peaks;
    std::vector<std::pair<double, double>> energy_by_peak;
    std::vector<empdist::JointObservation> charge_obs;

    SessionModel model;
    model.bins = bins;
    FitReport& report = model.report;

    for (const ChargingSession& s : sessions) {
        const bool ranged = in_range(bins.arrival, s.arrival_hour) &&
                            in_range(bins.departure, s.departure_hour) &&
                            in_range(bins.connection, s.connection_hours) &&
                            in_range(bins.charge, s.charge_hours) &&
                            in_range(bins.peak, s.peak_kw) &&
                            in_range(bins.energy, s.energy_kwh);
        if (!ranged) {
            ++report.skipped_out_of_range;
            continue;
        }
        if (s.charge_hours > s.connection_hours + kChargeSlackHours) {
            ++report.skipped_inconsistent;
            continue;
        }
        ++report.sessions_used;
        arrivals.push_back(s.arrival_hour);
        dep_by_arrival.emplace_back(s.arrival_hour, s.departure_hour);
        peaks.push_back(s.peak_kw);
        energy_by_peak.emplace_back(s.peak_kw, s.energy_kwh);
        charge_obs.push_back(
            {{s.connection_hours, s.peak_kw, s.energy_kwh}, s.charge_hours});
    }
    if (report.sessions_used == 0)
        throw Error("ev", "no usable sessions: every record was out of range or inconsistent");

    model.arrival_pdf = empdist::build_histogram(arrivals, bins.arrival);
    model.departure_given_arrival =
        empdist::build_conditional(dep_by_arrival, bins.arrival, bins.departure);
    model.peak_pdf = empdist::build_histogram(peaks, bins.peak);
    model.energy_given_peak = empdist::build_conditional(energy_by_peak, bins.peak, bins.energy);
    model.charge_given_conn_peak_energy = empdist::build_joint_conditional(
        charge_obs, {bins.connection, bins.peak, bins.energy}, bins.charge);

    report.empty_departure_rows = model.departure_given_arrival.empty_row_count();
    report.empty_energy_rows = model.energy_given_peak.empty_row_count();
    report.joint_cells = model.charge_given_conn_peak_energy.cells.size();
    return model;
}

SessionModel fit_session_model(std::span<const ingest::RawSessionRecord> records,
                               const SessionBinConfig& bins) {
    std::vector<ChargingSession> sessions;
    sessions.reserve(records.size());
    for (const auto& rec : records) sessions.push_back(to_session(rec));
    return fit_session_model(sessions, bins);
}

ChargingSession generate_session(const SessionModel& model, UniformSource& rng,
                                 const GenerateConfig& cfg, AttemptStats* stats) {
    AttemptStats local;
    AttemptStats& st = stats ? *stats : local;
    const SessionBinConfig& bins = model.bins;

    std::vector<std::size_t> observed_peak_bins;
    if (cfg.peak_sampling == PeakSampling::uniform_bins) {
        for (std::size_t i = 0; i < model.peak_pdf.counts.size(); ++i)
            if (model.peak_pdf.counts[i] > 0) observed_peak_bins.push_back(i);
    }

    for (std::size_t attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        ++st.attempts;

        // Stage 1: arrival.
        const std::size_t arr_bin = empdist::rws_select_bin(model.arrival_pdf, rng.next_uniform());
        const double arrival = empdist::sample_in_bin(bins.arrival, arr_bin, rng, cfg.within_bin);

        // Stage 2: departure given arrival; connection time follows from the
        // two clock hours (next-day wrap when departure reads earlier).
        if (!model.departure_given_arrival.has_row(arr_bin)) continue;
        const empdist::Histogram1D dep_row = model.departure_given_arrival.row(arr_bin);
        const std::size_t dep_bin = empdist::rws_select_bin(dep_row, rng.next_uniform());
        const double departure = empdist::sample_in_bin(bins.departure, dep_bin, rng, cfg.within_bin);
        const double connection = std::fmod(departure - arrival + 24.0, 24.0);
        const auto conn_bin = bins.connection.bin_of(connection);
        if (!conn_bin) continue;

        // Stage 3: peak power, then energy given peak.
        std::size_t peak_bin;
        if (cfg.peak_sampling == PeakSampling::uniform_bins) {
            const double u = rng.next_uniform();
            std::size_t idx = static_cast<std::size_t>(
                u * static_cast<double>(observed_peak_bins.size()));
            if (idx >= observed_peak_bins.size()) idx = observed_peak_bins.size() - 1;
            peak_bin = observed_peak_bins[idx];
        } else {
            peak_bin = empdist::rws_select_bin(model.peak_pdf, rng.next_uniform());
        }
        double peak = empdist::sample_in_bin(bins.peak, peak_bin, rng, cfg.within_bin);

        if (!model.energy_given_peak.has_row(peak_bin)) continue;
        const empdist::Histogram1D energy_row = model.energy_given_peak.row(peak_bin);
        const std::size_t energy_bin = empdist::rws_select_bin(energy_row, rng.next_uniform());
        double energy = empdist::sample_in_bin(bins.energy, energy_bin, rng, cfg.within_bin);

        // Stage 4: charge time given the (connection, peak, energy) bins. An
        // unseen combination means the attempt dies and restarts from stage 1.
        const std::uint32_t key[3] = {static_cast<std::uint32_t>(*conn_bin),
                                      static_cast<std::uint32_t>(peak_bin),
                                      static_cast<std::uint32_t>(energy_bin)};
        const empdist::Histogram1D* cell = model.charge_given_conn_peak_energy.lookup_bins(key);
        if (!cell) {
            ++st.joint_misses;
            continue;
        }
        const std::size_t charge_bin = empdist::rws_select_bin(*cell, rng.next_uniform());
        double charge = empdist::sample_in_bin(bins.charge, charge_bin, rng, cfg.within_bin);

        // Within-bin placements must also be physically consistent: the car
        // cannot charge longer than it is plugged in, and the energy cannot
        // exceed peak power sustained for the whole charge time. Bins stay
        // fixed; only positions are redrawn.
        const std::size_t budget =
            cfg.within_bin == empdist::WithinBin::midpoint ? 0 : cfg.max_consistency_resamples;
        bool accepted = false;
        for (std::size_t redraw = 0; redraw <= budget; ++redraw) {
            if (charge <= connection && energy <= peak * charge + kEnergySlackKwh) {
                accepted = true;
                break;
            }
            if (redraw == budget) break;
            ++st.consistency_resamples;
            peak = empdist::sample_in_bin(bins.peak, peak_bin, rng, cfg.within_bin);
            energy = empdist::sample_in_bin(bins.energy, energy_bin, rng, cfg.within_bin);
            charge = empdist::sample_in_bin(bins.charge, charge_bin, rng, cfg.within_bin);
        }
        if (!accepted) {
            ++st.consistency_restarts;
            continue;
        }

        ++st.scenarios;
        ChargingSession s;
        s.arrival_hour = arrival;
        s.departure_hour = departure;
        s.connection_hours = connection;
        s.charge_hours = charge;
        s.peak_kw = peak;
        s.energy_kwh = energy;
        return s;
    }

    std::ostringstream os;
    os << "no consistent scenario after " << cfg.max_attempts << " attempts";
    throw Error("ev", os.str());
}

BatchResult generate_batch(const SessionModel& model, std::size_t n, std::uint64_t seed,
                           const GenerateConfig& cfg, unsigned threads) {
    if (n == 0) throw Error("ev", "scenario count must be positive");
    if (threads == 0) threads = 1;

    BatchResult result;
    result.sessions.resize(n);

    const unsigned workers = static_cast<unsigned>(
        std::min<std::size_t>(threads, n));
    std::vector<AttemptStats> per_worker(workers);
    std::vector<std::string> errors(workers);

    auto run = [&](unsigned w) {
        // Scenario i always draws from stream (seed, i); partitioning by
        // index keeps the batch byte-identical across thread counts.
        for (std::size_t i = w; i < n; i += workers) {
            SeededSampler rng(seed, i);
            try {
                result.sessions[i] = generate_session(model, rng, cfg, &per_worker[w]);
            } catch (const std::exception& e) {
                if (errors[w].empty()) errors[w] = e.what();
                return;
            }
        }
    };

    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }
    for (const auto& err : errors)
        if (!err.empty()) throw Error("ev", err);
    for (const auto& st : per_worker) result.stats.merge(st);
    return result;
}

PowerProfile synthesize_power_profile(const ChargingSession& session, int resolution_minutes) {
    if (resolution_minutes <= 0 || 1440 % resolution_minutes != 0)
        throw Error("ev", "resolution must be a positive divisor of 1440 minutes");

    PowerProfile profile;
    profile.resolution_minutes = resolution_minutes;
    const std::size_t slots = static_cast<std::size_t>(2 * 1440 / resolution_minutes);
    profile.kw.assign(slots, 0.0);

    if (session.charge_hours <= 0.0) {
        if (session.energy_kwh > kEnergySlackKwh)
            throw Error("ev", "zero charge duration with nonzero energy");
        return profile;
    }

    // Constant average power from arrival for the charge duration. The cap at
    // the session peak absorbs the within-bin slack of the generator.
    const double p_avg = std::min(session.energy_kwh / session.charge_hours, session.peak_kw);
    const double start_min = session.arrival_hour * 60.0;
    const double end_min = start_min + session.charge_hours * 60.0;
    const double res = static_cast<double>(resolution_minutes);

    for (std::size_t k = 0; k < slots; ++k) {
        const double lo = static_cast<double>(k) * res;
        const double hi = lo + res;
        const double overlap = std::min(hi, end_min) - std::max(lo, start_min);
        if (overlap > 0.0) profile.kw[k] = p_avg * overlap / res;
    }
    return profile;
}

FanchartTable fanchart(std::span<const PowerProfile> profiles,
                       std::span<const int> levels_percent) {
    if (profiles.empty()) throw Error("ev", "fanchart needs at least one profile");
    if (levels_percent.empty()) throw Error("ev", "fanchart needs at least one level");
    const int res = profiles.front().resolution_minutes;
    const std::size_t slots = profiles.front().kw.size();
    for (const auto& p : profiles)
        if (p.resolution_minutes != res || p.kw.size() != slots)
            throw Error("ev", "fanchart profiles use mixed grids");
    for (int level : levels_percent)
        if (level < 0 || level > 100) throw Error("ev", "fanchart level outside [0, 100]");

    FanchartTable table;
    table.resolution_minutes = res;
    table.levels_percent.assign(levels_percent.begin(), levels_percent.end());
    table.kw.assign(levels_percent.size(), std::vector<double>(slots, 0.0));

    std::vector<double> column(profiles.size());
    for (std::size_t k = 0; k < slots; ++k) {
        for (std::size_t i = 0; i < profiles.size(); ++i) column[i] = profiles[i].kw[k];
        std::sort(column.begin(), column.end());
        for (std::size_t l = 0; l < table.levels_percent.size(); ++l)
            table.kw[l][k] = empdist::quantile_sorted(
                column, static_cast<double>(table.levels_percent[l]) / 100.0);
    }
    return table;
}

}  // namespace enscen::ev
