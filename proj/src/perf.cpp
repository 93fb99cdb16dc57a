#include "arelab/perf.hpp"

#include "arelab/errors.hpp"
#include "arelab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <string>

namespace arelab {

namespace {

// Q(theta, lambda) with the lambda = 0 point mass handled.
double poisson_cdf_below(unsigned theta, double lambda) {
    if (lambda == 0.0) return 1.0;
    return specfun::regularized_gamma_q(theta, lambda);
}

std::string describe_point(SweepAxis axis, double value) {
    std::ostringstream os;
    os.precision(12);
    os << "sweep point " << to_string(axis) << '=' << value << ": ";
    return os.str();
}

} // namespace

ErrorPair error_probs(unsigned theta, double mu_s, const IuiSpectrum& spectrum, double mu_n) {
    if (theta == 0) return ErrorPair{1.0, 0.0};
    ErrorPair e;
    for (const auto& atom : spectrum.atoms) {
        const double w = std::exp(atom.log_weight);
        e.q += w * poisson_cdf_below(theta, mu_s + atom.value + mu_n);
        e.p += w * (1.0 - poisson_cdf_below(theta, atom.value + mu_n));
    }
    e.p = std::clamp(e.p, 0.0, 1.0);
    e.q = std::clamp(e.q, 0.0, 1.0);
    return e;
}

double binary_entropy(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -(x * std::log2(x) + (1.0 - x) * std::log2(1.0 - x));
}

double link_rate(const ErrorPair& e) {
    const double p_out1 = 0.5 * (1.0 - e.q) + 0.5 * e.p;
    const double rate = binary_entropy(p_out1) - 0.5 * (binary_entropy(e.p) + binary_entropy(e.q));
    return std::clamp(rate, 0.0, 1.0);
}

double bsc_capacity(double ber) {
    if (!(ber >= 0.0 && ber <= 1.0)) throw ParameterError("bsc_capacity: ber must lie in [0, 1]");
    return 1.0 - binary_entropy(ber);
}

double spatial_rate(double area) {
    if (!(area > 0.0)) throw ParameterError("spatial_rate: cell area must be positive");
    return 1.0 / area;
}

double truncated_iui_fraction(const PhysicalParams& params, const ReceiverGeometry& geom, double t_m,
                              GridKind kind, double pitch, std::size_t n_interferers, unsigned k_max) {
    const GridLayout wide = enumerate_sites(kind, pitch, 4 * n_interferers);
    double included = 0.0, tail = 0.0;
    for (const TxSite& s : wide.sites()) {
        if (s.index == 0) continue;
        const double c = cir(t_m, s.radial_distance, params, geom, k_max);
        (s.index <= n_interferers ? included : tail) += c;
    }
    if (included == 0.0) return tail > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return tail / included;
}

PerfReport evaluate(const SystemConfig& config) {
    config.validate();
    const PhysicalParams params = config.physical();
    const ReceiverGeometry geom = ReceiverGeometry::centered(params);
    const GridLayout layout = enumerate_sites(config.grid, config.pitch, config.resolved_interferers());
    const ChannelSummary summary = summarize(params, geom, layout, config.k_max, config.peak_search());
    const IuiSpectrum spectrum = collapse_iui(ring_basis(summary));

    PerfReport r;
    r.theta_opt = optimal_threshold(summary.mu_s, spectrum, summary.mu_n, config.theta_cap);
    r.theta_sub = suboptimal_threshold(summary.mu_s, summary.cbar_sum(), summary.mu_n).threshold;
    r.theta_used = config.threshold_mode == ThresholdMode::Optimal ? r.theta_opt : r.theta_sub;
    r.errors = error_probs(r.theta_used, summary.mu_s, spectrum, summary.mu_n);
    r.ber = r.errors.ber();
    r.link_rate = link_rate(r.errors);
    r.cell_pitch = config.pitch;
    r.cell_area = cell_area(config.grid, config.pitch);
    r.spatial_rate = spatial_rate(r.cell_area);
    r.are = r.link_rate * r.spatial_rate;
    r.rx_radius = params.rx_radius;
    r.sinr_worst = sinr_worst(summary.mu_s, summary.cbar_sum()).value;
    r.t_m = summary.t_m;
    r.mu_s = summary.mu_s;
    r.n_interferers = layout.n_interferers();
    r.truncation_warning = truncated_iui_fraction(params, geom, summary.t_m, config.grid, config.pitch,
                                                  layout.n_interferers(), config.k_max) > kTruncationWarnFraction;
    return r;
}

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::CellPitch: return "cell_pitch";
    case SweepAxis::CellArea: return "cell_area";
    case SweepAxis::NMol: return "n_molecules";
    case SweepAxis::CNoise: return "noise_concentration";
    case SweepAxis::Diffusion: return "diffusion";
    }
    return "?";
}

SweepAxis parse_sweep_axis(std::string_view text) {
    if (text == "cell_pitch" || text == "c") return SweepAxis::CellPitch;
    if (text == "cell_area" || text == "area") return SweepAxis::CellArea;
    if (text == "n_molecules" || text == "nmol") return SweepAxis::NMol;
    if (text == "noise_concentration" || text == "cnoise") return SweepAxis::CNoise;
    if (text == "diffusion" || text == "diff") return SweepAxis::Diffusion;
    throw ParameterError("unknown sweep axis '" + std::string(text) + "'");
}

SystemConfig with_axis_value(const SystemConfig& config, SweepAxis axis, double value) {
    SystemConfig c = config;
    switch (axis) {
    case SweepAxis::CellPitch: c.pitch = value; break;
    case SweepAxis::CellArea: c.pitch = pitch_for_cell_area(c.grid, value); break;
    case SweepAxis::NMol:
        if (!(value >= 1.0) || value != std::floor(value))
            throw ParameterError("n_molecules must be a positive integer");
        c.n_molecules = static_cast<unsigned>(value);
        break;
    case SweepAxis::CNoise: c.noise_concentration = value; break;
    case SweepAxis::Diffusion: c.diffusion = value; break;
    }
    return c;
}

namespace {

PerfReport evaluate_point(const SystemConfig& config, SweepAxis axis, double value) {
    try {
        return evaluate(with_axis_value(config, axis, value));
    } catch (const ParameterError& e) {
        throw ParameterError(describe_point(axis, value) + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(e.key(), describe_point(axis, value) + e.what());
    } catch (const std::exception& e) {
        throw ComputationError(describe_point(axis, value) + e.what());
    }
}

} // namespace

std::vector<PerfReport> sweep_serial(const SystemConfig& config, SweepAxis axis, const std::vector<double>& values) {
    if (values.empty()) throw ParameterError("sweep: no values");
    std::vector<PerfReport> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(evaluate_point(config, axis, v));
    return out;
}

std::vector<PerfReport> sweep(const SystemConfig& config, SweepAxis axis, const std::vector<double>& values) {
    if (values.empty()) throw ParameterError("sweep: no values");
    const auto n = static_cast<std::ptrdiff_t>(values.size());
    std::vector<PerfReport> out(values.size());
    std::vector<std::exception_ptr> failures(values.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_threads())
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[i] = evaluate_point(config, axis, values[i]);
        } catch (...) {
            failures[i] = std::current_exception();
        }
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
    return out;
}

std::vector<double> geometric_grid(double from, double to, std::size_t points) {
    if (!(from > 0.0) || !(to > 0.0)) throw ParameterError("geometric_grid: bounds must be positive");
    if (points == 0) throw ParameterError("geometric_grid: need at least one point");
    if (points == 1) return {from};
    std::vector<double> out(points);
    const double log_from = std::log(from), log_to = std::log(to);
    for (std::size_t i = 0; i < points; ++i)
        out[i] = std::exp(log_from + (log_to - log_from) * static_cast<double>(i) / static_cast<double>(points - 1));
    out.front() = from;
    out.back() = to;
    return out;
}

RadiusOptimum optimize_radius(const SystemConfig& config, unsigned w_max, double step_frac) {
    if (w_max == 0) throw ParameterError("optimize_radius: w_max must be >= 1");
    if (!(step_frac > 0.0)) throw ParameterError("optimize_radius: step_frac must be positive");
    RadiusOptimum best;
    best.candidates.resize(w_max);
    for (unsigned w = 1; w <= w_max; ++w) best.candidates[w - 1] = RadiusCandidate{w, step_frac * w * config.pitch, {}};
    std::vector<std::exception_ptr> failures(w_max);
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_threads())
    for (int i = 0; i < static_cast<int>(w_max); ++i) {
        SystemConfig c = config;
        c.rx_radius = best.candidates[i].rx_radius;
        try {
            best.candidates[i].report = evaluate(c);
        } catch (...) {
            failures[i] = std::current_exception();
        }
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);

    std::size_t arg = 0;
    for (std::size_t i = 1; i < best.candidates.size(); ++i)
        if (best.candidates[i].report.are > best.candidates[arg].report.are) arg = i;
    best.w = best.candidates[arg].w;
    best.rx_radius = best.candidates[arg].rx_radius;
    best.report = best.candidates[arg].report;
    return best;
}

} // namespace arelab
