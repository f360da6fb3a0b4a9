#pragma once

#include <cstdint>
#include <random>

namespace enscen {

/// Source of uniform variates in [0, 1). Kept abstract so tests can inject
/// fixed sequences.
class UniformSource {
public:
    virtual ~UniformSource() = default;
    virtual double next_uniform() = 0;
};

/// Reproducible stream of uniforms: the same (seed, stream_id) always yields
/// the same draw sequence, independent of platform and thread count. Each
/// scenario gets its own stream so batches can be generated in parallel
/// without changing output.
class SeededSampler final : public UniformSource {
public:
    explicit SeededSampler(std::uint64_t seed, std::uint64_t stream_id = 0);

    double next_uniform() override;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

}  // namespace enscen
