#pragma once

#include <cstdint>

namespace seqdisc {

// SplitMix64: a 64-bit Weyl counter pushed through a bijective finalizer.
// Counter-based, so a (seed, stream) pair fully determines the sequence and
// identical seeds reproduce identical draws bit for bit on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    // Independent stream for partition `stream` of a run seeded with `seed`.
    static SplitMix64 for_stream(std::uint64_t seed, std::uint64_t stream) {
        return SplitMix64(mix(seed + mix(stream + 0x9E3779B97F4A7C15ULL)));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Uniform on [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on {0, ..., n-1} via the multiply-shift reduction.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1E4357B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace seqdisc
