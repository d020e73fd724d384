#pragma once

#include <cmath>
#include <cstdint>

namespace lcgf {

/// Counter-based random numbers (Philox 4x32-10).
///
/// Every draw is a pure function of (key, counter), so ensembles are
/// reproducible and independent of evaluation order and worker count.
/// The counter layout used throughout the library is
///   c0 = sample index, c1 = step/subdraw index, c2..c3 = mode key,
/// which also couples the coefficient of a given mode across different
/// frequency cutoffs (nested truncations share one realization).

struct RngKey {
    std::uint32_t k0 = 0;
    std::uint32_t k1 = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline void philox_round(std::uint32_t c[4], std::uint32_t k0, std::uint32_t k1) {
    constexpr std::uint64_t M0 = 0xD2511F53ULL, M1 = 0xCD9E8D57ULL;
    std::uint64_t p0 = M0 * c[0];
    std::uint64_t p1 = M1 * c[2];
    std::uint32_t h0 = std::uint32_t(p0 >> 32), l0 = std::uint32_t(p0);
    std::uint32_t h1 = std::uint32_t(p1 >> 32), l1 = std::uint32_t(p1);
    std::uint32_t n0 = h1 ^ c[1] ^ k0;
    std::uint32_t n2 = h0 ^ c[3] ^ k1;
    c[0] = n0;
    c[1] = l1;
    c[2] = n2;
    c[3] = l0;
}

}  // namespace detail

/// Derive an independent key from a master seed and a purpose tag.
inline RngKey derive_key(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t s = seed ^ (0x9E3779B97F4A7C15ULL * (tag + 1));
    std::uint64_t m = detail::splitmix64(s);
    return RngKey{std::uint32_t(m), std::uint32_t(m >> 32)};
}

struct RandomBlock {
    std::uint32_t x[4];
};

inline RandomBlock philox(RngKey key, std::uint64_t c01, std::uint64_t c23) {
    std::uint32_t c[4] = {std::uint32_t(c01), std::uint32_t(c01 >> 32), std::uint32_t(c23),
                          std::uint32_t(c23 >> 32)};
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    std::uint32_t k0 = key.k0, k1 = key.k1;
    for (int r = 0; r < 10; ++r) {
        detail::philox_round(c, k0, k1);
        k0 += W0;
        k1 += W1;
    }
    return RandomBlock{{c[0], c[1], c[2], c[3]}};
}

/// Uniform in (0,1]: 53-bit mantissa, never exactly zero (safe for log).
inline double uniform_open(std::uint32_t hi, std::uint32_t lo) {
    std::uint64_t bits = ((std::uint64_t(hi) << 32) | lo) >> 11;
    return double(bits + 1) * 0x1.0p-53;
}

struct NormalPair {
    double z0;
    double z1;
};

/// Two independent standard normals from one counter block (Box-Muller).
inline NormalPair normal_pair(RngKey key, std::uint64_t c01, std::uint64_t c23) {
    RandomBlock b = philox(key, c01, c23);
    double u1 = uniform_open(b.x[0], b.x[1]);
    double u2 = uniform_open(b.x[2], b.x[3]);
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 6.28318530717958647692 * u2;
    return NormalPair{r * std::cos(t), r * std::sin(t)};
}

/// Counter layout helper: (sample, step) packed into the low counter word.
inline std::uint64_t pack_sample_step(std::uint32_t sample, std::uint32_t step) {
    return std::uint64_t(sample) | (std::uint64_t(step) << 32);
}

}  // namespace lcgf
