#pragma once

#include <cstdint>

namespace vqabench {

/// SplitMix64 generator. Output is a pure function of the seed and identical
/// on every platform; this is the only randomness source used in the library.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1), strictly inside the open interval.
    double next_open_unit() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform in {0, ..., bound-1} by modulo reduction. The modulo bias is at
    /// most bound / 2^64; the mapping is fixed so streams reproduce bit-for-bit.
    std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

private:
    std::uint64_t state_;
};

/// SplitMix64 finalizer, usable as a standalone 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic substream seed for (master, stream, index), e.g. one stream
/// per instance and one per (instance, restart) pair.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index = 0) {
    std::uint64_t s = mix64(master + 0x9e3779b97f4a7c15ULL);
    s = mix64(s ^ (stream + 0x9e3779b97f4a7c15ULL));
    s = mix64(s ^ (index + 0x6a09e667f3bcc909ULL));
    return s;
}

}  // namespace vqabench
