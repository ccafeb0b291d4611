#pragma once

#include <cmath>
#include <cstdint>

namespace mlrtg {

// Counter-based random generator built on the SplitMix64 mixing function.
// A draw is a pure function of (seed, stream, counter), so replays survive
// refactors and generation order: stream layouts are documented at the call
// sites that own them. Gaussian variates use Box-Muller on the uniform pair
// at counters (2i, 2i+1).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(seed + 0x9e3779b97f4a7c15ULL * (stream + 1))) {}

    // Uniform in (0, 1); counter-indexed.
    double uniform(std::uint64_t i) const {
        const std::uint64_t bits = mix(key_ + 0x9e3779b97f4a7c15ULL * (i + 1));
        // 53-bit mantissa, shifted into (0,1) so log() below is safe
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal; draw i consumes uniform counters 2i and 2i+1.
    double normal(std::uint64_t i) const {
        const double u1 = uniform(2 * i);
        const double u2 = uniform(2 * i + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Uniform integer in [0, bound) via 128-bit multiply-shift.
    std::uint64_t below(std::uint64_t i, std::uint64_t bound) const {
        const std::uint64_t bits = mix(key_ + 0x9e3779b97f4a7c15ULL * (i + 1));
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(bits) * bound) >> 64);
    }

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

private:
    std::uint64_t key_;
};

}  // namespace mlrtg
