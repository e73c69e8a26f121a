#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace chanest {

/// Seeded random source used everywhere randomness is needed.
///
/// All draws go through explicit transformations of the raw mt19937_64
/// stream (instead of std:: distributions) so that identical seeds give
/// bit-identical sequences regardless of standard-library version.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform() {
        // 53 mantissa bits of a 64-bit draw
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (one value per call, cosine branch).
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        // guard against log(0)
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Circularly-symmetric complex normal with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance) {
        const double s = std::sqrt(variance / 2.0);
        return {s * normal(), s * normal()};
    }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // modulo bias is irrelevant at the sizes used here (n << 2^64)
        return engine_() % n;
    }

    /// Fisher-Yates shuffle of an index-like container.
    template <typename Container>
    void shuffle(Container& c) {
        using std::swap;
        for (std::size_t i = c.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            swap(c[i - 1], c[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace chanest
