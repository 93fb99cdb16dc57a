#include "arelab/channel.hpp"

#include "arelab/errors.hpp"
#include "arelab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace arelab {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ParameterError(what);
}

// Axial factor 1/2 (erf((vt - zS)/sqrt(4Dt)) - erf((vt - zE)/sqrt(4Dt))).
double axial_fraction(double t, const PhysicalParams& p, const ReceiverGeometry& g) {
    const double spread = std::sqrt(4.0 * p.diffusion * t);
    const double front = p.velocity * t;
    return 0.5 * specfun::erf_diff((front - g.z_start) / spread, (front - g.z_end) / spread);
}

} // namespace

void PhysicalParams::validate() const {
    require(diffusion > 0.0 && std::isfinite(diffusion), "diffusion must be positive");
    require(velocity >= 0.0 && std::isfinite(velocity), "velocity must be non-negative");
    require(distance > 0.0 && std::isfinite(distance), "distance must be positive");
    require(rx_radius > 0.0 && std::isfinite(rx_radius), "rx_radius must be positive");
    require(rx_length > 0.0 && std::isfinite(rx_length), "rx_length must be positive");
    require(n_molecules >= 1, "n_molecules must be >= 1");
    require(noise_concentration >= 0.0 && std::isfinite(noise_concentration),
            "noise_concentration must be non-negative");
}

ReceiverGeometry ReceiverGeometry::centered(const PhysicalParams& params) {
    ReceiverGeometry g;
    g.z_start = params.distance - 0.5 * params.rx_length;
    g.z_end = params.distance + 0.5 * params.rx_length;
    g.volume = params.rx_radius * params.rx_radius * std::numbers::pi * params.rx_length;
    return g;
}

double cir(double t, double radial_distance, const PhysicalParams& params,
           const ReceiverGeometry& geom, unsigned k_max) {
    if (!(t > 0.0)) throw ParameterError("cir: t must be positive");
    require(radial_distance >= 0.0, "cir: radial distance must be non-negative");

    const double axial = axial_fraction(t, params, geom);
    if (axial <= 0.0) return 0.0;

    const double four_dt = 4.0 * params.diffusion * t;
    const double offset = radial_distance * radial_distance / four_dt;
    const double capture = params.rx_radius * params.rx_radius / four_dt;

    // sum_k e^{-a} a^k / k! * P(k+1, X); the (k!)^2 of the series is split into
    // one k! inside the Poisson weight and one inside the regularized gamma.
    double radial = 0.0;
    if (offset == 0.0) {
        radial = specfun::regularized_gamma_p(1, capture);
    } else {
        const double log_offset = std::log(offset);
        for (unsigned k = 0; k <= k_max; ++k) {
            const double log_weight = k * log_offset - offset - std::lgamma(k + 1.0);
            radial += std::exp(log_weight) * specfun::regularized_gamma_p(k + 1, capture);
        }
    }
    return std::clamp(axial * radial, 0.0, 1.0);
}

double cir_or_zero(double t, double radial_distance, const PhysicalParams& params,
                   const ReceiverGeometry& geom, unsigned k_max) {
    if (t == 0.0) return 0.0;
    return cir(t, radial_distance, params, geom, k_max);
}

double cir_uca(double t, double radial_distance, const PhysicalParams& params,
               const ReceiverGeometry& geom) {
    if (!(t > 0.0)) throw ParameterError("cir_uca: t must be positive");
    const double four_dt = 4.0 * params.diffusion * t;
    const double z_centre = 0.5 * (geom.z_start + geom.z_end);
    const double dz = z_centre - params.velocity * t;
    const double exponent = -(radial_distance * radial_distance + dz * dz) / four_dt;
    const double concentration = std::exp(exponent) / std::pow(std::numbers::pi * four_dt, 1.5);
    return concentration * geom.volume;
}

double peak_time(const PhysicalParams& params, const ReceiverGeometry& geom,
                 const PeakSearch& search, unsigned k_max) {
    if (!(search.horizon > 0.0)) throw ParameterError("peak_time: horizon must be positive");
    if (!(search.tolerance > 0.0)) throw ParameterError("peak_time: tolerance must be positive");
    const unsigned n = std::max(search.coarse_points, 3u);
    const double step = search.horizon / n;

    auto f = [&](double t) { return cir(t, 0.0, params, geom, k_max); };

    std::vector<double> values(n);
    for (unsigned j = 0; j < n; ++j) values[j] = f(step * (j + 1));
    const auto best = std::max_element(values.begin(), values.end());
    const auto first = static_cast<unsigned>(best - values.begin());
    if (*best <= 0.0) throw ComputationError("peak_time: CIR vanishes on the whole horizon");

    unsigned last = first;
    while (last + 1 < n && values[last + 1] == *best) ++last;
    if (last == n - 1)
        throw ComputationError("peak_time: maximum at the search horizon; increase the horizon");
    if (last > first) return step * (0.5 * (first + last) + 1.0);

    double lo = step * first;  // t_{j-1}; the first grid point is step, so lo may be 0
    double hi = step * (first + 2);
    lo = std::max(lo, 1e-12 * search.horizon);

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > search.tolerance) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    return 0.5 * (lo + hi);
}

double ChannelSummary::cbar_sum() const {
    double s = 0.0;
    for (const RingMean& r : cbar) s += r.value * static_cast<double>(r.multiplicity);
    return s;
}

std::size_t ChannelSummary::n_interferers() const {
    std::size_t n = 0;
    for (const RingMean& r : cbar) n += r.multiplicity;
    return n;
}

ChannelSummary summarize_at(double t_m, const PhysicalParams& params, const ReceiverGeometry& geom,
                            const GridLayout& layout, unsigned k_max) {
    params.validate();
    ChannelSummary s;
    s.t_m = t_m;
    const double n_mol = static_cast<double>(params.n_molecules);
    s.mu_s = n_mol * cir(t_m, 0.0, params, geom, k_max);
    s.cbar.reserve(layout.rings().size());
    for (const Ring& ring : layout.rings())
        s.cbar.push_back(RingMean{ring.distance, n_mol * cir(t_m, ring.distance, params, geom, k_max), ring.count});
    s.mu_n = params.noise_concentration * geom.volume;
    return s;
}

ChannelSummary summarize(const PhysicalParams& params, const ReceiverGeometry& geom,
                         const GridLayout& layout, unsigned k_max, const PeakSearch& search) {
    params.validate();
    return summarize_at(peak_time(params, geom, search, k_max), params, geom, layout, k_max);
}

} // namespace arelab
