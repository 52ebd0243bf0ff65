#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace jetspace {

/// Deterministic RNG: draws are derived from the raw mt19937_64 stream, so a
/// seed produces the same values on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    double uniform()  // [0, 1)
    {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal()
    {
        // Box-Muller; one value per call keeps the stream position predictable.
        double u = uniform();
        while (u == 0.0) u = uniform();
        const double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
    }

private:
    std::mt19937_64 gen_;
};

/// Additive low-discrepancy sequence: frac(offset + i * alpha) per axis with
/// irrational alphas, well distributed for pair scans.
class Kronecker {
public:
    Kronecker(int dim, std::uint64_t seed);

    const std::vector<double>& next();

private:
    std::vector<double> alpha_;
    std::vector<double> state_;
};

}  // namespace jetspace
