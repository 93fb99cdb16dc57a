#include "arelab/montecarlo.hpp"

#include "arelab/errors.hpp"
#include "arelab/parallel.hpp"
#include "arelab/random.hpp"
#include "arelab/specfun.hpp"

#include <algorithm>
#include <cmath>

namespace arelab {

namespace {

// Counts are kept exactly; semi-analytic mode accumulates probabilities.
struct Tally {
    std::vector<std::uint64_t> hist0, hist1;  // r clamped to theta_max
    std::uint64_t n0 = 0, n1 = 0;
    std::vector<double> p_sum, q_sum;         // semi-analytic only

    explicit Tally(unsigned theta_max, McMode mode) : hist0(theta_max + 1), hist1(theta_max + 1) {
        if (mode == McMode::SemiAnalytic) {
            p_sum.assign(theta_max + 1, 0.0);
            q_sum.assign(theta_max + 1, 0.0);
        }
    }

    void merge(const Tally& o) {
        for (std::size_t i = 0; i < hist0.size(); ++i) {
            hist0[i] += o.hist0[i];
            hist1[i] += o.hist1[i];
        }
        n0 += o.n0;
        n1 += o.n1;
        for (std::size_t i = 0; i < p_sum.size(); ++i) {
            p_sum[i] += o.p_sum[i];
            q_sum[i] += o.q_sum[i];
        }
    }
};

double iui_draw(const ChannelSummary& s, Rng& rng) {
    double a = 0.0;
    for (const RingMean& ring : s.cbar) a += binomial_half(ring.multiplicity, rng) * ring.value;
    return a;
}

// cdf[theta] = P(Poisson(lambda) < theta) for theta = 0..theta_max.
void poisson_cdf_below(double lambda, std::vector<double>& cdf) {
    cdf[0] = 0.0;
    if (lambda == 0.0) {
        std::fill(cdf.begin() + 1, cdf.end(), 1.0);
        return;
    }
    static thread_local std::vector<double> log_fact;
    while (log_fact.size() < cdf.size()) log_fact.push_back(std::lgamma(static_cast<double>(log_fact.size()) + 1.0));
    const double log_lambda = std::log(lambda);
    double acc = 0.0;
    for (std::size_t j = 1; j < cdf.size(); ++j) {
        const double k = static_cast<double>(j - 1);
        acc += std::exp(k * log_lambda - lambda - log_fact[j - 1]);
        cdf[j] = std::min(acc, 1.0);
    }
}

void run_batch(const ChannelSummary& s, const McSettings& cfg, std::uint64_t batch, std::uint64_t count,
               Tally& t) {
    Rng rng = substream(cfg.seed, batch);
    const std::uint64_t cap = cfg.theta_max;
    if (cfg.mode == McMode::Stochastic) {
        for (std::uint64_t i = 0; i < count; ++i) {
            const bool one = (rng() >> 63) != 0;
            const double lambda = (one ? s.mu_s : 0.0) + iui_draw(s, rng) + s.mu_n;
            const std::uint64_t r = std::min(poisson_sample(lambda, rng), cap);
            if (one) {
                ++t.n1;
                ++t.hist1[r];
            } else {
                ++t.n0;
                ++t.hist0[r];
            }
        }
        return;
    }
    std::vector<double> cdf1(cap + 1), cdf0(cap + 1);
    for (std::uint64_t i = 0; i < count; ++i) {
        const double a = iui_draw(s, rng);
        poisson_cdf_below(s.mu_s + a + s.mu_n, cdf1);
        poisson_cdf_below(a + s.mu_n, cdf0);
        for (std::size_t th = 0; th <= cap; ++th) {
            t.q_sum[th] += cdf1[th];
            t.p_sum[th] += 1.0 - cdf0[th];
        }
    }
    t.n0 += count;
    t.n1 += count;
}

McResult finish(const Tally& t, const McSettings& cfg) {
    McResult out;
    out.samples = cfg.samples;
    out.seed = cfg.seed;
    out.mode = cfg.mode;
    out.per_threshold.resize(cfg.theta_max + 1);
    const double n = static_cast<double>(cfg.samples);

    std::uint64_t below0 = 0, below1 = 0;  // counts with r < theta
    for (unsigned th = 0; th <= cfg.theta_max; ++th) {
        ThresholdEstimate& e = out.per_threshold[th];
        e.theta = th;
        if (cfg.mode == McMode::Stochastic) {
            if (th > 0) {
                below0 += t.hist0[th - 1];
                below1 += t.hist1[th - 1];
            }
            const std::uint64_t false_alarms = t.n0 - below0;
            e.p = t.n0 ? static_cast<double>(false_alarms) / static_cast<double>(t.n0) : 0.0;
            e.q = t.n1 ? static_cast<double>(below1) / static_cast<double>(t.n1) : 0.0;
            e.ber = static_cast<double>(false_alarms + below1) / n;
        } else {
            e.p = t.p_sum[th] / n;
            e.q = t.q_sum[th] / n;
            e.ber = 0.5 * (e.p + e.q);
        }
        e.std_error = std::sqrt(std::max(e.ber * (1.0 - e.ber), 0.0) / n);
    }
    out.best = out.per_threshold.front();
    for (const auto& e : out.per_threshold)
        if (e.ber < out.best.ber) out.best = e;
    return out;
}

void check(const McSettings& cfg) {
    if (cfg.samples == 0) throw ParameterError("monte carlo: samples must be >= 1");
    if (cfg.theta_max == 0) throw ParameterError("monte carlo: theta_max must be >= 1");
}

std::uint64_t batch_count(const McSettings& cfg) {
    return (cfg.samples + kMcBatchSize - 1) / kMcBatchSize;
}

std::uint64_t batch_size(const McSettings& cfg, std::uint64_t b) {
    return std::min(kMcBatchSize, cfg.samples - b * kMcBatchSize);
}

} // namespace

McResult run_serial(const ChannelSummary& summary, const McSettings& cfg) {
    check(cfg);
    Tally total(cfg.theta_max, cfg.mode);
    for (std::uint64_t b = 0; b < batch_count(cfg); ++b) {
        Tally t(cfg.theta_max, cfg.mode);
        run_batch(summary, cfg, b, batch_size(cfg, b), t);
        total.merge(t);
    }
    return finish(total, cfg);
}

McResult run(const ChannelSummary& summary, const McSettings& cfg) {
    check(cfg);
    const auto n_batches = static_cast<std::ptrdiff_t>(batch_count(cfg));
    std::vector<Tally> tallies(static_cast<std::size_t>(n_batches), Tally(cfg.theta_max, cfg.mode));

#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_threads())
    for (std::ptrdiff_t b = 0; b < n_batches; ++b)
        run_batch(summary, cfg, static_cast<std::uint64_t>(b), batch_size(cfg, static_cast<std::uint64_t>(b)),
                  tallies[static_cast<std::size_t>(b)]);

    Tally total(cfg.theta_max, cfg.mode);
    for (const Tally& t : tallies) total.merge(t);
    return finish(total, cfg);
}

ChannelSummary validation_summary(const SystemConfig& config) {
    config.validate();
    const PhysicalParams params = config.physical();
    const ReceiverGeometry geom = ReceiverGeometry::centered(params);
    const double t_m = peak_time(params, geom, config.peak_search(), config.k_max);
    const GridLayout layout = enumerate_sites(config.grid, config.pitch, config.resolved_mc_interferers());
    return summarize_at(t_m, params, geom, layout, config.k_max);
}

} // namespace arelab
