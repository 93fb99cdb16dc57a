#pragma once

#include "arelab/channel.hpp"

#include <cstdint>
#include <vector>

namespace arelab {

struct PbsConfig {
    double dt = 1e-3;                 // s
    double t_sim = 15.0;              // s
    std::size_t realizations = 3000;
    std::size_t particles = 100;      // per release
    std::size_t report_every = 10;    // steps between recorded samples
    std::uint64_t seed = 1;

    void validate() const;
};

struct CirTrace {
    std::vector<double> times;
    std::vector<double> mean_fraction;
    std::vector<double> std_error;     // of the mean, across realizations
};

/// Brownian motion with drift v along z, released at (tx_x, tx_y, 0); the receiver
/// is transparent. Positions are advanced straight from one recorded time to the
/// next with the exact Gaussian transition, so dt only sets the time resolution.
CirTrace simulate_cir(const PhysicalParams& params, const ReceiverGeometry& geom, double tx_x, double tx_y,
                      const PbsConfig& cfg);
CirTrace simulate_cir_serial(const PhysicalParams& params, const ReceiverGeometry& geom, double tx_x, double tx_y,
                             const PbsConfig& cfg);

} // namespace arelab
