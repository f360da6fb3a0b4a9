#include "enscen/sampler.hpp"

namespace enscen {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= stream * 0x9e3779b97f4a7c15ULL + 0xd1b54a32d192ed03ULL;
    return a ^ splitmix64(s);
}

}  // namespace

SeededSampler::SeededSampler(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_(stream_id), engine_(mix_seed(seed, stream_id)) {}

double SeededSampler::next_uniform() {
    // 53-bit mantissa taken straight from the engine; uniform_real_distribution
    // is implementation-defined and would break cross-platform determinism.
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

}  // namespace enscen
