#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace supmax {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based stream: draw k of replicate i is mix64(key(seed, i) + (k+1) * golden),
/// i.e. SplitMix64 keyed per replicate. Nothing is shared between streams, so
/// results do not depend on scheduling.
class RandomStream {
public:
    using result_type = std::uint64_t;
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    RandomStream(std::uint64_t master_seed, std::uint64_t index)
        : state_(mix64(mix64(master_seed) ^ mix64(index + kGolden) ^ 0x5851F42D4C957F2DULL)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        state_ += kGolden;
        return mix64(state_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Exponential(1) by inversion of a 53-bit uniform; 0 when the uniform is 0.
    double exponential() { return -std::log1p(-uniform()); }

private:
    std::uint64_t state_;
};

/// Replicate i always draws from RandomStream(master_seed, i).
struct RngPolicy {
    std::uint64_t master_seed = 0;

    RandomStream stream(std::uint64_t replicate) const { return {master_seed, replicate}; }
};

} // namespace supmax
