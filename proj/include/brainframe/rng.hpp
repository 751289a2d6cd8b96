#pragma once

// Seeded random stream used for connectivity generation and initial-state
// jitter. The discipline is fixed so that other implementations can
// reproduce it bit for bit:
//
//   1. the user seed s is passed once through SplitMix64:
//        z = s + 0x9E3779B97F4A7C15
//        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//        z = z ^ (z >> 31)
//   2. z seeds a 64-bit Mersenne Twister (MT19937-64, std::mt19937_64)
//   3. a uniform double in [0,1) is (next() >> 11) * 2^-53
//
// A nonzero test for fixed-density connectivity draws exactly one uniform
// per matrix entry in row-major order.

#include <cstdint>
#include <random>

namespace brainframe {

constexpr std::uint64_t splitmix64(std::uint64_t seed) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class SeededStream {
public:
    explicit SeededStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::mt19937_64 engine_;
};

} // namespace brainframe
