#pragma once

#include <cstdint>
#include <initializer_list>

namespace cqc {

// Deterministic random streams. Every stochastic component derives its own
// stream from (seed, path...), so results do not depend on scheduling or on
// platform-specific std::distribution internals.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    // xoshiro256** step.
    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n); n must be positive. Rejection sampling keeps
    /// the draw exact and platform-independent.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
        std::uint64_t x = next_u64();
        while (x > limit) x = next_u64();
        return x % n;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
};

/// Stream derived from a master seed and a path of indices, e.g. one stream
/// per annealing read. Distinct paths give statistically independent streams.
inline Rng derive_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t acc = seed ^ 0x6d8f3c155b0e9a2fULL;
    for (std::uint64_t p : path) {
        std::uint64_t sm = acc + 0x100000001b3ULL * (p + 1);
        acc = splitmix64(sm);
    }
    return Rng(acc);
}

}  // namespace cqc
