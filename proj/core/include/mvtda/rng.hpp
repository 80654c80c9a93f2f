#pragma once

#include <cstdint>

namespace mvtda {

/// Counter-based pseudo-random generator (SplitMix64).
///
/// The state is a plain counter advanced by a Weyl constant and the output is
/// a strong 64-bit mix of it, so a stream keyed by (master seed, stream index)
/// yields the same sequence no matter which thread draws it or in what order
/// streams are processed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Unbiased draw from [0, n) via rejection sampling. n must be > 0.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = next();
        while (v >= limit) v = next();
        return v % n;
    }

    /// Uniform double in [0, 1) with 53 bits of precision.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Derives an independent stream key from a master seed and a stream index.
/// Used to make permutation replicate q reproducible regardless of how the
/// replicates are scheduled.
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream) {
    SplitMix64 g(master ^ (0x510e527fade682d1ULL + stream * 0x9e3779b97f4a7c15ULL));
    g.next();
    return g.next();
}

} // namespace mvtda
