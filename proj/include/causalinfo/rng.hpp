#pragma once

#include <cstdint>

namespace causalinfo {

/// Counter-based generator: draw k of stream `seed` is the k-th output of
/// SplitMix64 started at `seed`, i.e. mix(seed + (k + 1) * 0x9E3779B97F4A7C15)
/// with the standard SplitMix64 finalizer. Any draw can be computed without
/// producing the ones before it, which is what makes sampling reproducible
/// across implementations.
inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t counter_draw(std::uint64_t seed, std::uint64_t counter) noexcept {
    return splitmix64_mix(seed + (counter + 1) * 0x9E3779B97F4A7C15ULL);
}

/// Uniform double in [0, 1) from the top 53 bits of a draw.
inline constexpr double counter_uniform(std::uint64_t seed, std::uint64_t counter) noexcept {
    return static_cast<double>(counter_draw(seed, counter) >> 11) * 0x1.0p-53;
}

/// Sequential view over one counter stream.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    std::uint64_t next_u64() noexcept { return counter_draw(seed_, counter_++); }
    double uniform() noexcept { return counter_uniform(seed_, counter_++); }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Integer in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n) noexcept {
        auto k = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
        return k < n ? k : n - 1;
    }

    bool bernoulli(double p) noexcept { return uniform() < p; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace causalinfo
