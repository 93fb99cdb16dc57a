#pragma once

#include "arelab/channel.hpp"
#include "arelab/specfun.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace arelab {

/// One group of statistically identical interferers: `multiplicity` transmitters,
/// each contributing mean `cbar` molecules when active.
struct RingBasisEntry {
    double cbar = 0.0;
    std::size_t multiplicity = 0;
};

std::vector<RingBasisEntry> ring_basis(const ChannelSummary& summary);

/// Distribution of the total IUI mean over equiprobable interferer symbol vectors,
/// collapsed by ring: each atom is one tuple (k_1..k_R) of active counts per ring.
struct IuiSpectrum {
    std::vector<specfun::LogWeightedValue> atoms;
    std::vector<RingBasisEntry> basis;  // after merging equal rings

    double max_value() const;
};

inline constexpr std::size_t kDefaultAtomCap = 1'000'000;
inline constexpr double kRingMergeTolerance = 1e-9;

/// Rings whose means agree within kRingMergeTolerance (relative) are merged first;
/// rings with zero mean carry no interference and are dropped. Throws
/// ComputationError if the atom count would exceed `atom_cap`.
IuiSpectrum collapse_iui(std::span<const RingBasisEntry> basis, std::size_t atom_cap = kDefaultAtomCap);

/// Maximum-likelihood decision for received count r (Eq. ratio >= 1 decides 1).
int ml_decide(unsigned r, double mu_s, const IuiSpectrum& spectrum, double mu_n);

/// Default search cap 10 * ceil(mu_s + max atom + mu_n) + 50.
unsigned default_theta_cap(double mu_s, const IuiSpectrum& spectrum, double mu_n);

/// Smallest integer threshold Theta >= 0 at which the ML likelihood inequality
/// holds. theta_cap == 0 selects default_theta_cap(). Throws ComputationError if
/// no Theta <= cap qualifies.
unsigned optimal_threshold(double mu_s, const IuiSpectrum& spectrum, double mu_n, unsigned theta_cap = 0);

/// ceil() of every real root Phi in (0, phi_max] of the two-sided likelihood
/// equation, deduplicated and sorted. Roots are bracketed on a 0.25 grid and
/// bisected to 1e-9.
std::vector<unsigned> threshold_set(double mu_s, const IuiSpectrum& spectrum, double mu_n, double phi_max);

struct SuboptimalThreshold {
    double raw = 0.0;        // mu_s / ln(1 + mu_s / (cbar_sum/2 + mu_n))
    unsigned threshold = 1;  // ceil(raw), at least 1
    bool degenerate = false; // cbar_sum/2 + mu_n == 0
};

SuboptimalThreshold suboptimal_threshold(double mu_s, double cbar_sum, double mu_n);

struct SinrWorst {
    double value = 0.0;      // +inf when there is no interference
    bool no_iui = false;
};

SinrWorst sinr_worst(double mu_s, double cbar_sum);

struct DetectorSpec {
    unsigned theta_opt = 0;
    unsigned theta_sub = 0;
    std::size_t threshold_set_size = 0;
    double sinr_worst = 0.0;
};

/// Runs every detector design step for one channel summary.
DetectorSpec design_detector(const ChannelSummary& summary, const IuiSpectrum& spectrum,
                             unsigned theta_cap = 0);

} // namespace arelab
