#pragma once

#include "expsum/common.hpp"

#include <cmath>
#include <cstdint>
#include <string_view>
#include <utility>

namespace expsum {

// Deterministic, counter-keyed randomness. Every consumer derives its own
// stream from (master seed, purpose tag, trial index), so trials can run in
// any order, or in parallel, and still reproduce bit-for-bit.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t derive_stream_key(std::uint64_t master, std::string_view tag,
                                       std::uint64_t index) {
    std::uint64_t s = master;
    std::uint64_t k = splitmix64(s);
    s = k ^ fnv1a64(tag);
    k = splitmix64(s);
    s = k + index;
    return splitmix64(s);
}

/// xoshiro256++ seeded via splitmix64 expansion of a 64-bit stream key.
class Rng {
public:
    explicit Rng(std::uint64_t key) {
        std::uint64_t s = key;
        for (auto& w : state_) w = splitmix64(s);
    }

    Rng(std::uint64_t master, std::string_view tag, std::uint64_t index)
        : Rng(derive_stream_key(master, tag, index)) {}

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Unbiased uniform integer in [0, n); Lemire's multiply-shift rejection.
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n == 0) throw invalid_parameter("uniform_below(0)");
        while (true) {
            const std::uint64_t x = next_u64();
            const unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
            const auto lo = static_cast<std::uint64_t>(m);
            if (lo >= n || lo >= (0ULL - n) % n) {
                return static_cast<std::uint64_t>(m >> 64);
            }
        }
    }

    /// Two independent N(0,1) samples (Box-Muller).
    std::pair<double, double> normal_pair() {
        const double u1 = 1.0 - next_double();  // (0, 1]
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
    }

    /// Standard complex Gaussian CN(0,1): E|z|^2 = 1.
    cplx complex_gaussian() {
        const auto [a, b] = normal_pair();
        return cplx(a, b) / std::sqrt(2.0);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4] = {};
};

}  // namespace expsum
