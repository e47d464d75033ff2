// Seeded generators for the protocol simulation. SplitMix64 (Steele, Lea,
// Flood 2014): state += 0x9e3779b97f4a7c15, output is a fixed mix of the
// state, so the stream for a seed is fully specified by this file.
#pragma once

#include <cstdint>

namespace hdqw {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound) by rejection; bound > 0.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do x = next(); while (x >= limit);
        return x % bound;
    }

private:
    std::uint64_t state_;
};

/// Independent sub-stream seed: one SplitMix64 output of seed mixed with the stream id.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 g(seed ^ (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
    return g.next();
}

}  // namespace hdqw
