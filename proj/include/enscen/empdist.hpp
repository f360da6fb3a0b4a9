#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "enscen/sampler.hpp"

namespace enscen::empdist {

enum class Unit { hours, kilowatt, kilowatt_hour };

std::string_view unit_name(Unit u);
std::optional<Unit> unit_from_name(std::string_view name);

/// Contiguous half-open bins [lower_edge + i*width, lower_edge + (i+1)*width).
struct BinSpec {
    double lower_edge = 0.0;
    double width = 1.0;
    std::size_t count = 1;
    Unit unit = Unit::hours;

    double upper_edge() const { return lower_edge + width * static_cast<double>(count); }
    double lower(std::size_t i) const { return lower_edge + width * static_cast<double>(i); }
    double upper(std::size_t i) const { return lower_edge + width * static_cast<double>(i + 1); }
    double midpoint(std::size_t i) const { return lower(i) + width / 2.0; }

    /// Bin index of a value, or nullopt when the value falls outside the grid.
    std::optional<std::size_t> bin_of(double value) const;

    /// Throws std::invalid_argument on width <= 0 or count == 0.
    void validate() const;

    bool operator==(const BinSpec&) const = default;
};

/// Binned marginal with integer counts. `out_of_range` records how many build
/// samples fell outside the grid (reported, never clamped).
struct Histogram1D {
    BinSpec spec;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;
    std::uint64_t out_of_range = 0;

    double probability(std::size_t i) const {
        return total == 0 ? 0.0 : static_cast<double>(counts[i]) / static_cast<double>(total);
    }
    std::vector<double> probabilities() const;
};

/// Throws when no sample lands in range (nothing to normalize).
Histogram1D build_histogram(std::span<const double> samples, const BinSpec& spec);

/// Merges `group` consecutive bins; the last group may be shorter. Used for
/// coarse summary views (e.g. 4-kW peak-power groupings).
Histogram1D coarsen(const Histogram1D& h, std::size_t group);

/// counts[cond_bin][target_bin]; a pair contributes only when both
/// coordinates are in range, so row sums reproduce the target marginal of the
/// same pair set exactly.
struct ConditionalTable {
    BinSpec cond_spec;
    BinSpec target_spec;
    std::vector<std::vector<std::uint64_t>> counts;
    std::vector<std::uint64_t> row_totals;
    std::uint64_t out_of_range = 0;

    bool has_row(std::size_t cond_bin) const {
        return cond_bin < row_totals.size() && row_totals[cond_bin] > 0;
    }
    /// Throws on an empty row; check has_row first.
    Histogram1D row(std::size_t cond_bin) const;
    std::size_t empty_row_count() const;
};

ConditionalTable build_conditional(std::span<const std::pair<double, double>> pairs,
                                   const BinSpec& cond_spec, const BinSpec& target_spec);

struct JointObservation {
    std::vector<double> cond;
    double target = 0.0;
};

/// Sparse multi-variable conditional: conditioning bin-tuple -> target
/// histogram. Lookup of an unseen tuple is a distinguishable "no occurrence"
/// (nullptr), not an error.
struct JointConditionalTable {
    std::vector<BinSpec> cond_specs;
    BinSpec target_spec;
    std::map<std::vector<std::uint32_t>, Histogram1D> cells;
    std::uint64_t out_of_range = 0;

    const Histogram1D* lookup(std::span<const double> cond_values) const;
    const Histogram1D* lookup_bins(std::span<const std::uint32_t> bins) const;
    std::optional<std::vector<std::uint32_t>> bins_of(std::span<const double> cond_values) const;
};

JointConditionalTable build_joint_conditional(std::span<const JointObservation> observations,
                                              std::vector<BinSpec> cond_specs,
                                              const BinSpec& target_spec);

enum class WithinBin { uniform, midpoint };

/// First bin whose cumulative probability exceeds u. Zero-count bins are
/// never selected.
std::size_t rws_select_bin(const Histogram1D& dist, double u);

/// Value placed inside a given bin: uniform draw by default, midpoint when
/// exact bin-level reproduction is wanted.
double sample_in_bin(const BinSpec& spec, std::size_t bin, UniformSource& rng,
                     WithinBin mode = WithinBin::uniform);

/// Roulette-wheel draw: bin by cumulative probability, then a position inside
/// the bin. Throws on an empty distribution.
double rws_sample(const Histogram1D& dist, UniformSource& rng,
                  WithinBin mode = WithinBin::uniform);

/// Type-7 (linear interpolation) order statistic, q in [0, 1].
double quantile(std::span<const double> samples, double q);
/// Same convention over an already sorted, non-empty range.
double quantile_sorted(std::span<const double> sorted, double q);
/// Histogram quantile with within-bin linear interpolation.
double quantile(const Histogram1D& hist, double q);

}  // namespace enscen::empdist
