#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace neei {

// splitmix64, used to decorrelate derived seeds (tick index, element index, ...)
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic RNG. mt19937_64 output is fully specified by the standard and
// uniform/normal draws are built from raw 64-bit words (not std::*_distribution,
// whose algorithms are implementation-defined), so streams are portable.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // [0, 1)
    double uniform01() { return std::ldexp(static_cast<double>(eng_() >> 11), -53); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // standard normal via Box-Muller; second value of each pair is cached
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01(); // (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // complex circular Gaussian with E|z|^2 = 1
    std::complex<double> cgaussian() {
        const double re = normal();
        const double im = normal();
        return {re * M_SQRT1_2, im * M_SQRT1_2};
    }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace neei
