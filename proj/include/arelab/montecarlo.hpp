#pragma once

#include "arelab/channel.hpp"
#include "arelab/config.hpp"

#include <cstdint>
#include <vector>

namespace arelab {

struct McSettings {
    std::uint64_t samples = 500'000;
    unsigned theta_max = 100;
    McMode mode = McMode::Stochastic;
    std::uint64_t seed = 1;
};

/// Samples per RNG substream. Fixed so that results depend only on the seed.
inline constexpr std::uint64_t kMcBatchSize = 4096;

struct ThresholdEstimate {
    unsigned theta = 0;
    double ber = 0.0;
    double std_error = 0.0;  // sqrt(ber (1 - ber) / samples)
    double p = 0.0;
    double q = 0.0;
};

struct McResult {
    std::vector<ThresholdEstimate> per_threshold;  // theta = 0..theta_max
    ThresholdEstimate best;                        // lowest ber, ties to smaller theta
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    McMode mode = McMode::Stochastic;
};

/// Empirical BER of every threshold rule [r >= theta] on the summary's channel.
/// Stochastic: draws s0, per-ring active counts and the Poisson count r.
/// SemiAnalytic: draws only the interferer state and averages exact error
/// probabilities over it.
McResult run(const ChannelSummary& summary, const McSettings& settings);
McResult run_serial(const ChannelSummary& summary, const McSettings& settings);

/// Channel summary used for validation runs: same sampling time as the
/// analytic model, interferers extended to config.resolved_mc_interferers().
ChannelSummary validation_summary(const SystemConfig& config);

} // namespace arelab
