// Self-contained deterministic RNG (xoshiro256++ with splitmix64 seeding).
// std::normal_distribution is implementation-defined, which would break the
// bit-identical reproducibility contract of the expectation engine, so the
// uniform->normal transforms are spelled out here.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace bicm {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
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

    std::uint64_t next() {
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

    // Uniform on [0,1), 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1]; safe under log().
    double uniform_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

    // Standard normal via Box-Muller. Two uniforms per draw, no cached spare,
    // so the stream position is a fixed function of the draw count.
    double normal() {
        const double u = uniform_pos();
        const double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * pi * v);
    }

    // Circularly symmetric complex Gaussian, E|z|^2 = 1.
    std::complex<double> cnormal() {
        const double u = uniform_pos();
        const double v = uniform();
        const double r = std::sqrt(-std::log(u));
        return {r * std::cos(2.0 * pi * v), r * std::sin(2.0 * pi * v)};
    }

    // Uniform integer in [0, n).
    int uniform_int(int n) { return static_cast<int>(uniform() * n); }

private:
    static constexpr double pi = 3.14159265358979323846;

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
};

} // namespace bicm
