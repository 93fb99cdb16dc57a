#pragma once

#include "arelab/config.hpp"
#include "arelab/detection.hpp"

#include <string_view>
#include <vector>

namespace arelab {

/// p: false alarm (decide 1 given 0). q: miss (decide 0 given 1).
struct ErrorPair {
    double p = 0.0;
    double q = 0.0;

    double ber() const { return 0.5 * (p + q); }
};

/// Threshold rule [r >= theta] averaged over the IUI spectrum.
ErrorPair error_probs(unsigned theta, double mu_s, const IuiSpectrum& spectrum, double mu_n);

/// H2(x) in bits, with 0 log 0 = 0.
double binary_entropy(double x);

/// Mutual information of the binary channel with equiprobable input, bits per use.
double link_rate(const ErrorPair& errors);

double bsc_capacity(double ber);

/// Links per m^2: 1 / cell_area.
double spatial_rate(double cell_area);

struct PerfReport {
    unsigned theta_used = 0;
    unsigned theta_opt = 0;
    unsigned theta_sub = 0;
    ErrorPair errors;
    double ber = 0.0;
    double link_rate = 0.0;      // bits/use
    double spatial_rate = 0.0;   // 1/m^2
    double are = 0.0;            // bits/m^2
    double cell_pitch = 0.0;
    double cell_area = 0.0;
    double rx_radius = 0.0;
    double sinr_worst = 0.0;
    double t_m = 0.0;
    double mu_s = 0.0;
    std::size_t n_interferers = 0;
    bool truncation_warning = false;
};

/// IUI of the interferers beyond the first n (up to 4n), relative to the IUI of
/// the first n. Above kTruncationWarnFraction the report is flagged.
inline constexpr double kTruncationWarnFraction = 0.01;

double truncated_iui_fraction(const PhysicalParams& params, const ReceiverGeometry& geom, double t_m,
                              GridKind kind, double pitch, std::size_t n_interferers, unsigned k_max);

PerfReport evaluate(const SystemConfig& config);

enum class SweepAxis { CellPitch, CellArea, NMol, CNoise, Diffusion };

std::string_view to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view text);

/// Copy of `config` with the swept quantity replaced by `value`.
SystemConfig with_axis_value(const SystemConfig& config, SweepAxis axis, double value);

/// One report per value, in input order. Points run on worker threads.
/// A failing point aborts the sweep; the error names the axis value.
std::vector<PerfReport> sweep(const SystemConfig& config, SweepAxis axis, const std::vector<double>& values);
std::vector<PerfReport> sweep_serial(const SystemConfig& config, SweepAxis axis, const std::vector<double>& values);

/// `points` values from `from` to `to`, equally spaced in log.
std::vector<double> geometric_grid(double from, double to, std::size_t points);

struct RadiusCandidate {
    unsigned w = 0;
    double rx_radius = 0.0;
    PerfReport report;
};

struct RadiusOptimum {
    unsigned w = 0;
    double rx_radius = 0.0;
    PerfReport report;
    std::vector<RadiusCandidate> candidates;
};

/// Full search over S = step_frac * w * pitch, w = 1..w_max; the largest ARE wins,
/// ties go to the smaller radius.
RadiusOptimum optimize_radius(const SystemConfig& config, unsigned w_max = 25, double step_frac = 0.02);

} // namespace arelab
