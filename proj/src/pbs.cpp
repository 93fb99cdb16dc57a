#include "arelab/pbs.hpp"

#include "arelab/errors.hpp"
#include "arelab/parallel.hpp"
#include "arelab/random.hpp"

#include <cmath>

namespace arelab {

void PbsConfig::validate() const {
    if (!(dt > 0.0)) throw ParameterError("pbs: dt must be positive");
    if (!(t_sim > dt)) throw ParameterError("pbs: dt must be smaller than t_sim");
    if (realizations == 0) throw ParameterError("pbs: realizations must be >= 1");
    if (particles == 0) throw ParameterError("pbs: particles must be >= 1");
    if (report_every == 0) throw ParameterError("pbs: report_every must be >= 1");
}

namespace {

struct Plan {
    std::vector<double> times;
    double interval = 0.0;
};

Plan make_plan(const PbsConfig& cfg) {
    Plan plan;
    plan.interval = cfg.dt * static_cast<double>(cfg.report_every);
    const auto n_steps = static_cast<std::size_t>(std::floor(cfg.t_sim / cfg.dt + 1e-9));
    for (std::size_t step = cfg.report_every; step <= n_steps; step += cfg.report_every)
        plan.times.push_back(cfg.dt * static_cast<double>(step));
    if (plan.times.empty()) throw ParameterError("pbs: t_sim shorter than one report interval");
    return plan;
}

// Adds one realization's per-time counts to `sum` and their squares to `sum_sq`.
void realization(const PhysicalParams& params, const ReceiverGeometry& geom, double tx_x, double tx_y,
                 const PbsConfig& cfg, const Plan& plan, std::uint64_t index, std::vector<std::uint64_t>& sum,
                 std::vector<std::uint64_t>& sum_sq) {
    Rng rng = substream(cfg.seed, index);
    std::normal_distribution<double> gauss(0.0, std::sqrt(2.0 * params.diffusion * plan.interval));
    const double drift = params.velocity * plan.interval;
    const double r2 = params.rx_radius * params.rx_radius;

    std::vector<double> x(cfg.particles, tx_x), y(cfg.particles, tx_y), z(cfg.particles, 0.0);
    for (std::size_t k = 0; k < plan.times.size(); ++k) {
        std::uint64_t inside = 0;
        for (std::size_t i = 0; i < cfg.particles; ++i) {
            x[i] += gauss(rng);
            y[i] += gauss(rng);
            z[i] += drift + gauss(rng);
            if (x[i] * x[i] + y[i] * y[i] <= r2 && z[i] >= geom.z_start && z[i] <= geom.z_end) ++inside;
        }
        sum[k] += inside;
        sum_sq[k] += inside * inside;
    }
}

CirTrace finish(const PbsConfig& cfg, const Plan& plan, const std::vector<std::uint64_t>& sum,
                const std::vector<std::uint64_t>& sum_sq) {
    CirTrace out;
    out.times = plan.times;
    const double n = static_cast<double>(cfg.realizations);
    const double m = static_cast<double>(cfg.particles);
    for (std::size_t k = 0; k < plan.times.size(); ++k) {
        const double mean = static_cast<double>(sum[k]) / (n * m);
        double se = 0.0;
        if (cfg.realizations > 1) {
            const double var = (static_cast<double>(sum_sq[k]) / (m * m) - n * mean * mean) / (n - 1.0);
            se = std::sqrt(std::max(var, 0.0) / n);
        }
        out.mean_fraction.push_back(mean);
        out.std_error.push_back(se);
    }
    return out;
}

} // namespace

CirTrace simulate_cir_serial(const PhysicalParams& params, const ReceiverGeometry& geom, double tx_x, double tx_y,
                             const PbsConfig& cfg) {
    cfg.validate();
    params.validate();
    const Plan plan = make_plan(cfg);
    std::vector<std::uint64_t> sum(plan.times.size()), sum_sq(plan.times.size());
    for (std::size_t j = 0; j < cfg.realizations; ++j)
        realization(params, geom, tx_x, tx_y, cfg, plan, j, sum, sum_sq);
    return finish(cfg, plan, sum, sum_sq);
}

CirTrace simulate_cir(const PhysicalParams& params, const ReceiverGeometry& geom, double tx_x, double tx_y,
                      const PbsConfig& cfg) {
    cfg.validate();
    params.validate();
    const Plan plan = make_plan(cfg);
    const std::size_t n_times = plan.times.size();
    std::vector<std::uint64_t> sum(n_times), sum_sq(n_times);
    const auto n = static_cast<std::ptrdiff_t>(cfg.realizations);

#pragma omp parallel num_threads(worker_threads())
    {
        std::vector<std::uint64_t> local(n_times), local_sq(n_times);
#pragma omp for schedule(dynamic, 8)
        for (std::ptrdiff_t j = 0; j < n; ++j)
            realization(params, geom, tx_x, tx_y, cfg, plan, static_cast<std::uint64_t>(j), local, local_sq);
#pragma omp critical
        for (std::size_t k = 0; k < n_times; ++k) {
            sum[k] += local[k];
            sum_sq[k] += local_sq[k];
        }
    }
    return finish(cfg, plan, sum, sum_sq);
}

} // namespace arelab
