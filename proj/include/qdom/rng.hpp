#pragma once

#include "qdom/rational.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace qdom {

// Deterministic source of test data. All draws are derived from raw
// mt19937_64 output (never from std:: distributions, whose streams are
// implementation-defined), so a seed pins the byte-exact report content.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }

    // Uniform in [0,1) with 53 random bits.
    double unit() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

    // Uniform integer in [lo, hi] inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(bits() % span);
    }

    bool coin(double p = 0.5) { return unit() < p; }

    // Uniform rational in [0,1] with denominator <= max_den.
    Rat unit_rat(std::int64_t max_den = 16) {
        const auto den = range(1, max_den);
        const auto num = range(0, den);
        return Rat(num, den);
    }

    // Standard normal via Box-Muller on our own uniforms.
    double gauss() {
        double u1 = unit();
        while (u1 <= 0.0) u1 = unit();
        const double u2 = unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    std::complex<double> cgauss() { return {gauss(), gauss()}; }

private:
    std::mt19937_64 engine_;
};

}  // namespace qdom
