#include "arelab/random.hpp"

#include "arelab/errors.hpp"

#include <bit>
#include <cmath>

namespace arelab {

Rng substream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x6d6f6c63u};
    return Rng(seq);
}

namespace {

double uniform01(Rng& rng) {
    return std::generate_canonical<double, 53>(rng);
}

std::uint64_t poisson_inversion(double lambda, Rng& rng) {
    double u = uniform01(rng);
    double pmf = std::exp(-lambda);
    double cdf = pmf;
    std::uint64_t k = 0;
    while (u > cdf) {
        ++k;
        pmf *= lambda / static_cast<double>(k);
        cdf += pmf;
        if (pmf <= 0.0 && cdf < u) {  // rounding left a gap above the last term
            u = uniform01(rng);
            pmf = std::exp(-lambda);
            cdf = pmf;
            k = 0;
        }
    }
    return k;
}

// Hormann (1993), transformed rejection with squeeze.
std::uint64_t poisson_ptrs(double lambda, Rng& rng) {
    const double slam = std::sqrt(lambda);
    const double loglam = std::log(lambda);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = uniform01(rng) - 0.5;
        const double v = uniform01(rng);
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
            -lambda + kf * loglam - std::lgamma(kf + 1.0))
            return static_cast<std::uint64_t>(kf);
    }
}

} // namespace

std::uint64_t poisson_sample(double lambda, Rng& rng) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("poisson_sample: lambda must be finite and >= 0");
    if (lambda == 0.0) return 0;
    return lambda < 30.0 ? poisson_inversion(lambda, rng) : poisson_ptrs(lambda, rng);
}

unsigned binomial_half(std::size_t n, Rng& rng) {
    unsigned k = 0;
    while (n >= 64) {
        k += static_cast<unsigned>(std::popcount(rng()));
        n -= 64;
    }
    if (n > 0) k += static_cast<unsigned>(std::popcount(rng() & ((std::uint64_t{1} << n) - 1)));
    return k;
}

} // namespace arelab
