#pragma once

#include "arelab/channel.hpp"
#include "arelab/gridgeom.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace arelab {

enum class ThresholdMode { Optimal, Suboptimal };
enum class McMode { Stochastic, SemiAnalytic };

std::string_view to_string(ThresholdMode mode);
std::string_view to_string(McMode mode);

/// Every physical, protocol and numerical setting of one run. Defaults are the
/// reference scenario: hexagonal grid, c = 0.2 m, receivers touching.
struct SystemConfig {
    // grid
    GridKind grid = GridKind::Hexagonal;
    double pitch = 0.2;                     // cell centre distance of the selected grid, m
    std::size_t n_interferers = 0;          // 0: 36 (hex) / 24 (square)

    // channel
    double diffusion = 0.01;
    double velocity = 0.2;
    double distance = 0.5;
    double rx_length = 0.2;
    std::optional<double> rx_radius;        // unset: pitch / 2 (receivers touch)
    unsigned n_molecules = 100;
    double noise_concentration = 0.0;

    // numerics
    unsigned k_max = kDefaultKMax;
    double peak_horizon = 15.0;
    double peak_tolerance = 1e-6;
    ThresholdMode threshold_mode = ThresholdMode::Optimal;
    unsigned theta_cap = 0;                 // 0: automatic

    // Monte Carlo
    std::uint64_t mc_samples = 500'000;
    unsigned mc_theta_max = 100;
    std::size_t mc_interferers = 0;         // 0: 1260 (hex) / 840 (square)
    McMode mc_mode = McMode::Stochastic;

    // particle-based simulation
    double pbs_dt = 1e-3;
    double pbs_t_sim = 15.0;
    std::size_t pbs_realizations = 3000;
    std::size_t pbs_particles = 100;
    std::size_t pbs_report_every = 10;

    std::uint64_t seed = 1;

    std::size_t resolved_interferers() const;
    std::size_t resolved_mc_interferers() const;
    double resolved_rx_radius() const;
    PhysicalParams physical() const;
    PeakSearch peak_search() const;

    /// Throws ConfigError naming the first invalid key.
    void validate() const;
};

/// Ordered key/value view of a config, as written by write_config().
std::vector<std::pair<std::string, std::string>> config_entries(const SystemConfig& config);

/// Sets one key from its text form. Throws ConfigError for unknown keys or bad values.
void apply_config_entry(SystemConfig& config, std::string_view key, std::string_view value);

/// Flat "key = value" text; '#' and ';' start comments; [sections] are ignored.
SystemConfig read_config(std::istream& in, SystemConfig base = {});
SystemConfig load_config_file(const std::string& path, SystemConfig base = {});
void write_config(std::ostream& out, const SystemConfig& config, std::string_view line_prefix = "");

} // namespace arelab
