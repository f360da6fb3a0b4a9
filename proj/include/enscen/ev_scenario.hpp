#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "enscen/empdist.hpp"
#include "enscen/records.hpp"
#include "enscen/sampler.hpp"

namespace enscen::ev {

/// One charging event in model coordinates: clock hours for the time fields,
/// durations in hours, power in kW, energy in kWh.
struct ChargingSession {
    double arrival_hour = 0.0;    // [0, 24)
    double departure_hour = 0.0;  // [0, 24)
    double connection_hours = 0.0;
    double charge_hours = 0.0;
    double peak_kw = 0.0;
    double energy_kwh = 0.0;
};

/// Session in model coordinates from a raw record. Connection time is the
/// elapsed span between the timestamps (not the provider's rounded column),
/// which keeps it consistent with the arrival/departure clock hours.
ChargingSession to_session(const ingest::RawSessionRecord& rec);

/// Bin layout for the five session quantities. The defaults give hourly
/// arrival/departure bins over the day, half-hour duration bins up to a day,
/// 1-kW power bins and 2-kWh energy bins.
struct SessionBinConfig {
    empdist::BinSpec arrival{0.0, 1.0, 24, empdist::Unit::hours};
    empdist::BinSpec departure{0.0, 1.0, 24, empdist::Unit::hours};
    empdist::BinSpec connection{0.0, 0.5, 48, empdist::Unit::hours};
    empdist::BinSpec charge{0.0, 0.5, 48, empdist::Unit::hours};
    empdist::BinSpec peak{0.0, 1.0, 23, empdist::Unit::kilowatt};
    empdist::BinSpec energy{0.0, 2.0, 45, empdist::Unit::kilowatt_hour};

    void validate() const;

    bool operator==(const SessionBinConfig&) const = default;
};

struct FitReport {
    std::size_t sessions_used = 0;
    std::size_t skipped_out_of_range = 0;   // any of the six values off the grid
    std::size_t skipped_inconsistent = 0;   // charge time above connection time
    std::size_t empty_departure_rows = 0;   // arrival bins never observed
    std::size_t empty_energy_rows = 0;      // peak bins never observed
    std::size_t joint_cells = 0;
};

/// The fitted sampling chain: arrival marginal, departure conditioned on
/// arrival, peak-power marginal, energy conditioned on peak, and charge time
/// conditioned jointly on (connection, peak, energy) bins. All five tables
/// are built from the same filtered session set, so every bin reachable
/// during generation has observations behind it.
struct SessionModel {
    SessionBinConfig bins;
    empdist::Histogram1D arrival_pdf;
    empdist::ConditionalTable departure_given_arrival;
    empdist::Histogram1D peak_pdf;
    empdist::ConditionalTable energy_given_peak;
    empdist::JointConditionalTable charge_given_conn_peak_energy;
    FitReport report;
};

/// Throws enscen::Error when no session survives the range/consistency
/// filter.
SessionModel fit_session_model(std::span<const ChargingSession> sessions,
                               const SessionBinConfig& bins = {});
SessionModel fit_session_model(std::span<const ingest::RawSessionRecord> records,
                               const SessionBinConfig& bins = {});

/// Peak power is drawn from its empirical marginal by default; uniform_bins
/// instead picks uniformly among the observed peak bins, which stresses rare
/// high-power sessions in stress studies.
enum class PeakSampling { marginal, uniform_bins };

struct GenerateConfig {
    PeakSampling peak_sampling = PeakSampling::marginal;
    empdist::WithinBin within_bin = empdist::WithinBin::uniform;
    std::size_t max_attempts = 1000;             // full restarts before giving up
    std::size_t max_consistency_resamples = 10;  // within-bin redraws per attempt
};

struct AttemptStats {
    std::uint64_t scenarios = 0;
    std::uint64_t attempts = 0;
    std::uint64_t joint_misses = 0;           // unseen (conn, peak, energy) combination
    std::uint64_t consistency_restarts = 0;   // redraw budget exhausted
    std::uint64_t consistency_resamples = 0;  // within-bin redraws taken

    void merge(const AttemptStats& other);
};

/// One scenario through the sampling chain. A combination with no observed
/// charge-time cell restarts the attempt from the arrival draw; physically
/// inconsistent within-bin placements are redrawn inside their bins before a
/// restart is forced. Throws enscen::Error when max_attempts is exhausted.
ChargingSession generate_session(const SessionModel& model, UniformSource& rng,
                                 const GenerateConfig& cfg = {}, AttemptStats* stats = nullptr);

struct BatchResult {
    std::vector<ChargingSession> sessions;
    AttemptStats stats;
};

/// Deterministic batch: scenario i is drawn from stream (seed, i), so the
/// result is identical for any thread count. Throws on n == 0.
BatchResult generate_batch(const SessionModel& model, std::size_t n, std::uint64_t seed,
                           const GenerateConfig& cfg = {}, unsigned threads = 1);

/// Constant-power charging profile on a fixed grid. The axis spans two civil
/// days so sessions that run past midnight keep their tail; slot k covers
/// [k*res, (k+1)*res) minutes from day-one midnight.
struct PowerProfile {
    int resolution_minutes = 15;
    std::vector<double> kw;
};

/// Average power = energy / charge time, held from arrival for the charge
/// duration, prorated over partially covered slots. The average is capped at
/// the session peak; a zero charge time with nonzero energy is an error.
PowerProfile synthesize_power_profile(const ChargingSession& session, int resolution_minutes = 15);

/// Per-slot percentile curves over a set of equally gridded profiles.
struct FanchartTable {
    int resolution_minutes = 15;
    std::vector<int> levels_percent;
    std::vector<std::vector<double>> kw;  // kw[level][slot]
};

FanchartTable fanchart(std::span<const PowerProfile> profiles, std::span<const int> levels_percent);

}  // namespace enscen::ev
