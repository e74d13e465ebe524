#pragma once

#include <cmath>
#include <cstdint>

namespace glbfed {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace detail

// Stable mapping (seed, salt) -> derived seed, so sweeps and figures give each
// grid point an independent, reproducible stream family.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    return detail::mix64(detail::mix64(seed) ^ detail::mix64(~salt));
}

// xoshiro256++ seeded through splitmix64. Stream r of a given seed is an
// independent generator: replication r always consumes stream (seed, r)
// regardless of scheduling, which keeps estimates bit-for-bit reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t x = detail::mix64(seed) ^ detail::mix64(stream * 2 + 1);
        for (auto& w : s_) w = detail::mix64(x++);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0,1), 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1], safe under log().
    double uniform_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

    double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

    bool bernoulli(double p) { return uniform() < p; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

} // namespace glbfed
