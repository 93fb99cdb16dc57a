#pragma once

#include "arelab/gridgeom.hpp"

#include <cstddef>
#include <vector>

namespace arelab {

/// Physical and protocol parameters of one link. SI units throughout.
struct PhysicalParams {
    double diffusion = 0.01;            // D, m^2/s
    double velocity = 0.2;              // v, flow along +z, m/s
    double distance = 0.5;              // d, TX plane to RX plane, m
    double rx_radius = 0.1;             // S_RX, m
    double rx_length = 0.2;             // L_RX, m
    unsigned n_molecules = 100;         // molecules released for a 1-symbol
    double noise_concentration = 0.0;   // C_noise, 1/m^3

    /// Throws ParameterError naming the first violated field.
    void validate() const;
};

/// Axial extent of the cylindrical receiver. Transmitters sit at z = 0.
struct ReceiverGeometry {
    double z_start = 0.0;
    double z_end = 0.0;
    double volume = 0.0;

    /// Receiver centred on the RX plane: z in [d - L/2, d + L/2].
    static ReceiverGeometry centered(const PhysicalParams& params);
};

inline constexpr unsigned kDefaultKMax = 20;

/// Expected fraction of one molecule, released at t = 0 by a transmitter at
/// radial offset `radial_distance`, that is inside the receiver at time t.
/// The Bessel-series sum is truncated after `k_max`. Throws ParameterError for t <= 0.
double cir(double t, double radial_distance, const PhysicalParams& params,
           const ReceiverGeometry& geom, unsigned k_max = kDefaultKMax);

/// As cir(), but returns the t -> 0+ limit (0) at t == 0.
double cir_or_zero(double t, double radial_distance, const PhysicalParams& params,
                   const ReceiverGeometry& geom, unsigned k_max = kDefaultKMax);

/// Uniform-concentration baseline: point concentration at the receiver centre times V_RX.
double cir_uca(double t, double radial_distance, const PhysicalParams& params,
               const ReceiverGeometry& geom);

struct PeakSearch {
    double horizon = 15.0;   // s
    double tolerance = 1e-6; // s
    unsigned coarse_points = 1000;
};

/// Sampling time t_m: the maximiser of cir(t, 0) on (0, horizon]. A coarse scan
/// picks the bracket, golden-section search refines it. If the coarse maximum is
/// a run of exactly equal values (a flat plateau) the run's midpoint is returned.
/// Throws ComputationError if the maximum sits on the horizon.
double peak_time(const PhysicalParams& params, const ReceiverGeometry& geom,
                 const PeakSearch& search = {}, unsigned k_max = kDefaultKMax);

/// Expected count contributed by every interferer of one distance class.
struct RingMean {
    double distance = 0.0;          // m
    double value = 0.0;             // molecules per interferer
    std::size_t multiplicity = 0;
};

struct ChannelSummary {
    double t_m = 0.0;
    double mu_s = 0.0;
    std::vector<RingMean> cbar;     // ring-grouped, increasing distance
    double mu_n = 0.0;

    /// Total IUI mean when every interferer is active.
    double cbar_sum() const;
    std::size_t n_interferers() const;
};

/// Expected signal, per-ring interference and noise counts at t_m.
ChannelSummary summarize(const PhysicalParams& params, const ReceiverGeometry& geom,
                         const GridLayout& layout, unsigned k_max = kDefaultKMax,
                         const PeakSearch& search = {});

/// Same, with the sampling time supplied by the caller.
ChannelSummary summarize_at(double t_m, const PhysicalParams& params, const ReceiverGeometry& geom,
                            const GridLayout& layout, unsigned k_max = kDefaultKMax);

} // namespace arelab
