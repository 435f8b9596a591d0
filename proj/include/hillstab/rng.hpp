#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hillstab {

/// Deterministic uniform doubles from a fixed-width engine. The standard
/// distributions are implementation-defined, so seeded artifacts go through
/// this instead.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Log-uniform over [lo, hi], lo > 0.
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

}  // namespace hillstab
