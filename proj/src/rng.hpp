#pragma once

#include "matrix.hpp"

#include <cstdint>
#include <vector>

namespace chancoh {

/// Deterministic random source. All distributions are derived from raw
/// 64-bit draws so a given seed reproduces identical streams on one platform
/// regardless of the standard library in use.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t bits();
    double uniform();                        // [0, 1)
    double uniform(double lo, double hi);
    std::uint64_t below(std::uint64_t bound); // [0, bound)
    double gaussian();                        // standard normal, Box-Muller
    Complex gaussian_complex();               // independent N(0,1) real and imaginary parts

    /// Uniform sample from the scaled simplex {x >= 0, sum x = total}.
    std::vector<double> simplex(std::size_t n, double total = 1.0);

    std::vector<std::size_t> permutation(std::size_t n);

    /// Stable sub-stream seed for (seed, index) pairs; schedule independent.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index);

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace chancoh
