#pragma once

// Deterministic, platform-independent pseudo-random draws. Standard-library
// distributions are implementation-defined, so seeded experiment data would
// not be reproducible across toolchains with them.

#include <complex>
#include <cstdint>
#include <vector>

namespace fastctrl {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [-1, 1].
    double uniform_pm1() { return 2.0 * uniform() - 1.0; }
};

// Unit vector with complex Gaussian-ish entries (Box-Muller on SplitMix64).
inline std::vector<std::complex<double>> random_unit_vector(std::size_t n,
                                                            std::uint64_t seed,
                                                            bool real_valued = false) {
    SplitMix64 rng(seed);
    std::vector<std::complex<double>> v(n);
    double norm_sq = 0.0;
    for (auto& z : v) {
        double u1 = rng.uniform();
        double u2 = rng.uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = r * std::cos(2.0 * 3.14159265358979323846 * u2);
        double b = real_valued ? 0.0 : r * std::sin(2.0 * 3.14159265358979323846 * u2);
        z = {a, b};
        norm_sq += a * a + b * b;
    }
    double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& z : v) z *= inv;
    return v;
}

}  // namespace fastctrl
