#include "enscen/empdist.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace enscen::empdist {

std::string_view unit_name(Unit u) {
    switch (u) {
        case Unit::hours: return "hours";
        case Unit::kilowatt: return "kW";
        case Unit::kilowatt_hour: return "kWh";
    }
    return "?";
}

std::optional<Unit> unit_from_name(std::string_view name) {
    if (name == "hours") return Unit::hours;
    if (name == "kW") return Unit::kilowatt;
    if (name == "kWh") return Unit::kilowatt_hour;
    return std::nullopt;
}

std::optional<std::size_t> BinSpec::bin_of(double value) const {
    if (!(value >= lower_edge)) return std::nullopt;  // also rejects NaN
    const double offset = (value - lower_edge) / width;
    if (offset >= static_cast<double>(count)) return std::nullopt;
    auto idx = static_cast<std::size_t>(offset);
    if (idx >= count) return std::nullopt;
    return idx;
}

void BinSpec::validate() const {
    if (!(width > 0.0)) throw std::invalid_argument("BinSpec: width must be positive");
    if (count == 0) throw std::invalid_argument("BinSpec: count must be at least 1");
}

std::vector<double> Histogram1D::probabilities() const {
    std::vector<double> p(counts.size(), 0.0);
    for (std::size_t i = 0; i < counts.size(); ++i) p[i] = probability(i);
    return p;
}

Histogram1D build_histogram(std::span<const double> samples, const BinSpec& spec) {
    spec.validate();
    Histogram1D h;
    h.spec = spec;
    h.counts.assign(spec.count, 0);
    for (double v : samples) {
        if (auto i = spec.bin_of(v)) {
            ++h.counts[*i];
            ++h.total;
        } else {
            ++h.out_of_range;
        }
    }
    if (h.total == 0)
        throw std::invalid_argument("build_histogram: no in-range samples to normalize");
    return h;
}

Histogram1D coarsen(const Histogram1D& h, std::size_t group) {
    if (group == 0) throw std::invalid_argument("coarsen: group must be at least 1");
    Histogram1D out;
    out.spec = h.spec;
    out.spec.width = h.spec.width * static_cast<double>(group);
    out.spec.count = (h.spec.count + group - 1) / group;
    out.counts.assign(out.spec.count, 0);
    out.total = h.total;
    out.out_of_range = h.out_of_range;
    for (std::size_t i = 0; i < h.counts.size(); ++i) out.counts[i / group] += h.counts[i];
    return out;
}

Histogram1D ConditionalTable::row(std::size_t cond_bin) const {
    if (!has_row(cond_bin))
        throw std::invalid_argument("ConditionalTable: empty or out-of-range conditioning row");
    Histogram1D h;
    h.spec = target_spec;
    h.counts = counts[cond_bin];
    h.total = row_totals[cond_bin];
    return h;
}

std::size_t ConditionalTable::empty_row_count() const {
    std::size_t n = 0;
    for (auto t : row_totals)
        if (t == 0) ++n;
    return n;
}

ConditionalTable build_conditional(std::span<const std::pair<double, double>> pairs,
                                   const BinSpec& cond_spec, const BinSpec& target_spec) {
    cond_spec.validate();
    target_spec.validate();
    ConditionalTable t;
    t.cond_spec = cond_spec;
    t.target_spec = target_spec;
    t.counts.assign(cond_spec.count, std::vector<std::uint64_t>(target_spec.count, 0));
    t.row_totals.assign(cond_spec.count, 0);
    for (const auto& [x, y] : pairs) {
        auto cx = cond_spec.bin_of(x);
        auto cy = target_spec.bin_of(y);
        if (cx && cy) {
            ++t.counts[*cx][*cy];
            ++t.row_totals[*cx];
        } else {
            ++t.out_of_range;
        }
    }
    return t;
}

const Histogram1D* JointConditionalTable::lookup(std::span<const double> cond_values) const {
    auto bins = bins_of(cond_values);
    if (!bins) return nullptr;
    return lookup_bins(*bins);
}

const Histogram1D* JointConditionalTable::lookup_bins(std::span<const std::uint32_t> bins) const {
    auto it = cells.find(std::vector<std::uint32_t>(bins.begin(), bins.end()));
    return it == cells.end() ? nullptr : &it->second;
}

std::optional<std::vector<std::uint32_t>> JointConditionalTable::bins_of(
    std::span<const double> cond_values) const {
    if (cond_values.size() != cond_specs.size()) return std::nullopt;
    std::vector<std::uint32_t> bins(cond_specs.size());
    for (std::size_t i = 0; i < cond_specs.size(); ++i) {
        auto b = cond_specs[i].bin_of(cond_values[i]);
        if (!b) return std::nullopt;
        bins[i] = static_cast<std::uint32_t>(*b);
    }
    return bins;
}

JointConditionalTable build_joint_conditional(std::span<const JointObservation> observations,
                                              std::vector<BinSpec> cond_specs,
                                              const BinSpec& target_spec) {
    for (const auto& s : cond_specs) s.validate();
    target_spec.validate();
    JointConditionalTable t;
    t.cond_specs = std::move(cond_specs);
    t.target_spec = target_spec;
    for (const auto& obs : observations) {
        if (obs.cond.size() != t.cond_specs.size())
            throw std::invalid_argument("build_joint_conditional: arity mismatch");
        auto bins = t.bins_of(obs.cond);
        auto tb = target_spec.bin_of(obs.target);
        if (!bins || !tb) {
            ++t.out_of_range;
            continue;
        }
        auto [it, inserted] = t.cells.try_emplace(*bins);
        if (inserted) {
            it->second.spec = target_spec;
            it->second.counts.assign(target_spec.count, 0);
        }
        ++it->second.counts[*tb];
        ++it->second.total;
    }
    return t;
}

std::size_t rws_select_bin(const Histogram1D& dist, double u) {
    if (dist.total == 0) throw std::invalid_argument("rws_select_bin: empty distribution");
    // Integer cumulative counts sidestep float drift in the CDF.
    const double threshold = u * static_cast<double>(dist.total);
    std::uint64_t cum = 0;
    for (std::size_t i = 0; i < dist.counts.size(); ++i) {
        cum += dist.counts[i];
        if (static_cast<double>(cum) > threshold) return i;
    }
    // u < 1 guarantees a hit above; defend against u == 1 callers anyway
    for (std::size_t i = dist.counts.size(); i-- > 0;)
        if (dist.counts[i] > 0) return i;
    throw std::invalid_argument("rws_select_bin: empty distribution");
}

double sample_in_bin(const BinSpec& spec, std::size_t bin, UniformSource& rng, WithinBin mode) {
    if (mode == WithinBin::midpoint) return spec.midpoint(bin);
    return spec.lower(bin) + rng.next_uniform() * spec.width;
}

double rws_sample(const Histogram1D& dist, UniformSource& rng, WithinBin mode) {
    const std::size_t bin = rws_select_bin(dist, rng.next_uniform());
    return sample_in_bin(dist.spec, bin, rng, mode);
}

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile: empty input");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q outside [0, 1]");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double quantile(std::span<const double> samples, double q) {
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    return quantile_sorted(sorted, q);
}

double quantile(const Histogram1D& hist, double q) {
    if (hist.total == 0) throw std::invalid_argument("quantile: empty histogram");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q outside [0, 1]");
    const double target = q * static_cast<double>(hist.total);
    std::uint64_t before = 0;
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        if (hist.counts[i] == 0) continue;
        const std::uint64_t cum = before + hist.counts[i];
        if (static_cast<double>(cum) >= target) {
            const double t =
                std::max(0.0, (target - static_cast<double>(before))) /
                static_cast<double>(hist.counts[i]);
            return hist.spec.lower(i) + t * hist.spec.width;
        }
        before = cum;
    }
    // q == 1 with rounding: upper edge of the last occupied bin
    for (std::size_t i = hist.counts.size(); i-- > 0;)
        if (hist.counts[i] > 0) return hist.spec.upper(i);
    throw std::invalid_argument("quantile: empty histogram");
}

}  // namespace enscen::empdist
