#include "arelab/detection.hpp"

#include "arelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace arelab {

namespace {

using specfun::LogWeightedValue;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_binomial(std::size_t n, std::size_t k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(static_cast<double>(n - k) + 1.0);
}

// Precomputed per-atom quantities for evaluating both likelihood mixtures at
// many exponents: ln(mean) and (log_weight - mean) for the s = 1 and s = 0 hypotheses.
struct Mixtures {
    std::vector<double> log_mean1, offset1;
    std::vector<double> log_mean0, offset0;
    mutable std::vector<double> scratch;

    Mixtures(double mu_s, const IuiSpectrum& spectrum, double mu_n) {
        const std::size_t n = spectrum.atoms.size();
        log_mean1.resize(n);
        offset1.resize(n);
        log_mean0.resize(n);
        offset0.resize(n);
        scratch.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const LogWeightedValue& a = spectrum.atoms[i];
            const double m1 = mu_s + a.value + mu_n;
            const double m0 = a.value + mu_n;
            log_mean1[i] = std::log(m1);
            offset1[i] = a.log_weight - m1;
            log_mean0[i] = m0 > 0.0 ? std::log(m0) : kNegInf;
            offset0[i] = a.log_weight - m0;
        }
    }

    // ln sum_i mean_i^phi e^{-mean_i} w_i, with 0^0 = 1.
    double eval(const std::vector<double>& log_mean, const std::vector<double>& offset, double phi) const {
        for (std::size_t i = 0; i < log_mean.size(); ++i) {
            const double pow_term = (phi == 0.0) ? 0.0 : (log_mean[i] == kNegInf ? kNegInf : phi * log_mean[i]);
            scratch[i] = pow_term + offset[i];
        }
        return specfun::log_sum_exp(scratch);
    }

    // ln(numerator) - ln(denominator); +inf when the denominator vanishes.
    double log_ratio(double phi) const {
        const double num = eval(log_mean1, offset1, phi);
        const double den = eval(log_mean0, offset0, phi);
        if (den == kNegInf) return std::numeric_limits<double>::infinity();
        return num - den;
    }
};

} // namespace

std::vector<RingBasisEntry> ring_basis(const ChannelSummary& summary) {
    std::vector<RingBasisEntry> out;
    out.reserve(summary.cbar.size());
    for (const RingMean& r : summary.cbar) out.push_back(RingBasisEntry{r.value, r.multiplicity});
    return out;
}

double IuiSpectrum::max_value() const {
    double m = 0.0;
    for (const auto& a : atoms) m = std::max(m, a.value);
    return m;
}

IuiSpectrum collapse_iui(std::span<const RingBasisEntry> basis, std::size_t atom_cap) {
    IuiSpectrum spectrum;
    for (const RingBasisEntry& e : basis) {
        if (e.multiplicity == 0) throw ParameterError("collapse_iui: ring multiplicity must be >= 1");
        if (!(e.cbar >= 0.0) || !std::isfinite(e.cbar)) throw ParameterError("collapse_iui: ring mean must be >= 0");
        if (e.cbar == 0.0) continue;
        auto same = std::find_if(spectrum.basis.begin(), spectrum.basis.end(), [&](const RingBasisEntry& m) {
            return std::abs(m.cbar - e.cbar) <= kRingMergeTolerance * std::max(m.cbar, e.cbar);
        });
        if (same != spectrum.basis.end())
            same->multiplicity += e.multiplicity;
        else
            spectrum.basis.push_back(e);
    }

    double count = 1.0;
    for (const RingBasisEntry& e : spectrum.basis) count *= static_cast<double>(e.multiplicity + 1);
    if (count > static_cast<double>(atom_cap))
        throw ComputationError("collapse_iui: " + std::to_string(static_cast<long double>(count)) +
                               " IUI atoms exceed the cap of " + std::to_string(atom_cap) +
                               "; reduce the interferer count or merge rings with a coarser tolerance");

    spectrum.atoms.reserve(static_cast<std::size_t>(count));
    spectrum.atoms.push_back(LogWeightedValue{0.0, 0.0});
    std::vector<LogWeightedValue> next;
    for (const RingBasisEntry& e : spectrum.basis) {
        const double log_half_n = static_cast<double>(e.multiplicity) * std::log(2.0);
        next.clear();
        next.reserve(spectrum.atoms.size() * (e.multiplicity + 1));
        for (const LogWeightedValue& a : spectrum.atoms) {
            for (std::size_t k = 0; k <= e.multiplicity; ++k) {
                next.push_back(LogWeightedValue{a.value + static_cast<double>(k) * e.cbar,
                                                a.log_weight + log_binomial(e.multiplicity, k) - log_half_n});
            }
        }
        spectrum.atoms.swap(next);
    }
    return spectrum;
}

int ml_decide(unsigned r, double mu_s, const IuiSpectrum& spectrum, double mu_n) {
    const Mixtures mix(mu_s, spectrum, mu_n);
    return mix.log_ratio(static_cast<double>(r)) >= 0.0 ? 1 : 0;
}

unsigned default_theta_cap(double mu_s, const IuiSpectrum& spectrum, double mu_n) {
    return 10u * static_cast<unsigned>(std::ceil(mu_s + spectrum.max_value() + mu_n)) + 50u;
}

unsigned optimal_threshold(double mu_s, const IuiSpectrum& spectrum, double mu_n, unsigned theta_cap) {
    if (theta_cap == 0) theta_cap = default_theta_cap(mu_s, spectrum, mu_n);
    const Mixtures mix(mu_s, spectrum, mu_n);
    for (unsigned theta = 0; theta <= theta_cap; ++theta)
        if (mix.log_ratio(theta) >= 0.0) return theta;
    throw ComputationError("optimal_threshold: no threshold <= " + std::to_string(theta_cap) +
                           " satisfies the likelihood inequality; raise theta_cap");
}

std::vector<unsigned> threshold_set(double mu_s, const IuiSpectrum& spectrum, double mu_n, double phi_max) {
    if (!(phi_max >= 1.0)) throw ParameterError("threshold_set: phi_max must be >= 1");
    const Mixtures mix(mu_s, spectrum, mu_n);
    constexpr double step = 0.25;
    constexpr double tol = 1e-9;

    std::vector<unsigned> roots;
    double lo = 0.0;
    double g_lo = mix.log_ratio(lo);
    const auto n_steps = static_cast<std::size_t>(std::ceil(phi_max / step));
    for (std::size_t i = 1; i <= n_steps; ++i) {
        const double hi = std::min(phi_max, step * static_cast<double>(i));
        const double g_hi = mix.log_ratio(hi);
        if ((g_lo < 0.0) != (g_hi < 0.0)) {
            double a = lo, b = hi;
            const bool rising = g_lo < 0.0;
            while (b - a > tol) {
                const double mid = 0.5 * (a + b);
                const bool mid_negative = mix.log_ratio(mid) < 0.0;
                if (mid_negative == rising) a = mid; else b = mid;
            }
            roots.push_back(static_cast<unsigned>(std::ceil(0.5 * (a + b))));
        }
        lo = hi;
        g_lo = g_hi;
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

SuboptimalThreshold suboptimal_threshold(double mu_s, double cbar_sum, double mu_n) {
    if (!(mu_s > 0.0)) throw ParameterError("suboptimal_threshold: mu_s must be positive");
    if (!(cbar_sum >= 0.0) || !(mu_n >= 0.0)) throw ParameterError("suboptimal_threshold: means must be >= 0");
    SuboptimalThreshold out;
    const double background = 0.5 * cbar_sum + mu_n;
    if (background == 0.0) {
        out.raw = 0.0;
        out.threshold = 1;
        out.degenerate = true;
        return out;
    }
    out.raw = mu_s / std::log1p(mu_s / background);
    out.threshold = std::max(1u, static_cast<unsigned>(std::ceil(out.raw)));
    return out;
}

SinrWorst sinr_worst(double mu_s, double cbar_sum) {
    if (!(cbar_sum >= 0.0)) throw ParameterError("sinr_worst: cbar_sum must be >= 0");
    if (cbar_sum == 0.0) return SinrWorst{std::numeric_limits<double>::infinity(), true};
    return SinrWorst{mu_s / cbar_sum, false};
}

DetectorSpec design_detector(const ChannelSummary& summary, const IuiSpectrum& spectrum, unsigned theta_cap) {
    DetectorSpec spec;
    if (theta_cap == 0) theta_cap = default_theta_cap(summary.mu_s, spectrum, summary.mu_n);
    spec.theta_opt = optimal_threshold(summary.mu_s, spectrum, summary.mu_n, theta_cap);
    spec.theta_sub = suboptimal_threshold(summary.mu_s, summary.cbar_sum(), summary.mu_n).threshold;
    spec.threshold_set_size = threshold_set(summary.mu_s, spectrum, summary.mu_n, theta_cap).size();
    spec.sinr_worst = sinr_worst(summary.mu_s, summary.cbar_sum()).value;
    return spec;
}

} // namespace arelab
