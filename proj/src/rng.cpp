#include "rng.hpp"

#include "error.hpp"

#include <cmath>

namespace chancoh {

namespace {

// splitmix64; passes BigCrush and needs no warmup.
std::uint64_t splitmix(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

Rng::Rng(std::uint64_t seed) : state_(seed ^ 0xD1B54A32D192ED03ull) {}

std::uint64_t Rng::bits() { return splitmix(state_); }

double Rng::uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) raise(Errc::invalid_argument, "Rng::below: zero bound");
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = bits();
    } while (x >= limit);
    return x % bound;
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    do {
        u = uniform();
    } while (u <= 0.0);
    const double v = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u));
    const double angle = 2.0 * M_PI * v;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

Complex Rng::gaussian_complex() {
    const double re = gaussian();
    const double im = gaussian();
    return Complex(re, im);
}

std::vector<double> Rng::simplex(std::size_t n, double total) {
    // Exponential spacings: normalized -log(u) draws are Dirichlet(1,...,1).
    std::vector<double> x(n);
    double sum = 0.0;
    for (double& xi : x) {
        double u = 0.0;
        do {
            u = uniform();
        } while (u <= 0.0);
        xi = -std::log(u);
        sum += xi;
    }
    for (double& xi : x) xi *= total / sum;
    return x;
}

std::vector<std::size_t> Rng::permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(below(i));
        std::swap(p[i - 1], p[j]);
    }
    return p;
}

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    std::uint64_t a = splitmix(s);
    return a;
}

} // namespace chancoh
