#pragma once

#include <cstdint>
#include <random>

namespace arelab {

using Rng = std::mt19937_64;

/// Independent generator for (seed, stream). Streams index batches or
/// realizations, so results never depend on how work is spread over threads.
Rng substream(std::uint64_t seed, std::uint64_t stream);

/// Exact Poisson variate: inversion below lambda = 30, PTRS transformed rejection above.
std::uint64_t poisson_sample(double lambda, Rng& rng);

/// Binomial(n, 1/2) as the popcount of n fair random bits.
unsigned binomial_half(std::size_t n, Rng& rng);

} // namespace arelab
