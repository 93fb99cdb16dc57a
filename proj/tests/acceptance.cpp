// Acceptance run: one PASS/FAIL line per criterion, indented detail lines below it.
// Exit status is the number of failed criteria (capped at 125).

#include "arelab/channel.hpp"
#include "arelab/config.hpp"
#include "arelab/detection.hpp"
#include "arelab/montecarlo.hpp"
#include "arelab/pbs.hpp"
#include "arelab/perf.hpp"
#include "arelab/specfun.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace arelab;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        detail << "    " << (ok ? "ok   " : "FAIL ") << what << '\n';
        pass = pass && ok;
    }
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
    char buf[200];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.check(secs < limit_s, fmt("runtime %.2f s (limit %.0f s)", secs, limit_s));
    std::printf("%s criterion %d: %s\n%s", o.pass ? "PASS" : "FAIL", id, title, o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

ChannelSummary hex_summary(double pitch, std::size_t n_interferers, unsigned n_mol = 100, double c_noise = 0.0) {
    SystemConfig c;
    c.pitch = pitch;
    c.n_molecules = n_mol;
    c.noise_concentration = c_noise;
    const PhysicalParams p = c.physical();
    const ReceiverGeometry g = ReceiverGeometry::centered(p);
    return summarize(p, g, enumerate_sites(GridKind::Hexagonal, pitch, n_interferers));
}

struct Peak {
    std::size_t index = 0;
    double axis = 0.0;
    double are = 0.0;
};

Peak peak_of(const std::vector<double>& axis, const std::vector<PerfReport>& reports) {
    Peak p;
    for (std::size_t i = 0; i < reports.size(); ++i)
        if (reports[i].are > p.are) p = Peak{i, axis[i], reports[i].are};
    return p;
}

void sinr_reproduction(Outcome& o) {
    struct Case {
        double pitch;
        std::size_t n;
        double expected;
    };
    for (const Case& c : {Case{0.2, 6, 0.276588}, Case{0.2, 18, 0.175053}, Case{0.2, 36, 0.163543},
                          Case{0.5, 6, 1.726913}}) {
        const ChannelSummary s = hex_summary(c.pitch, c.n);
        const double got = sinr_worst(s.mu_s, s.cbar_sum()).value;
        const double rel = std::abs(got - c.expected) / c.expected;
        o.check(rel <= 1e-3, fmt("c = %.1f m", c.pitch) + ", " + std::to_string(c.n) + " interferers: " +
                                 fmt("%.6f vs %.6f (rel. err. %.2e)", got, c.expected, rel));
    }
}

void cir_quadrature(Outcome& o) {
    const PhysicalParams p;
    const ReceiverGeometry g = ReceiverGeometry::centered(p);
    const oracle::Channel ch{p.diffusion, p.velocity, p.rx_radius, g.z_start, g.z_end};
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> ut(0.5, 10.0), ur(0.0, 0.6);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double t = ut(rng), r = ur(rng);
        const double ref = oracle::cir_quadrature(t, r, ch);
        worst = std::max(worst, std::abs(cir(t, r, p, g) - ref) / ref);
    }
    o.check(worst <= 1e-8, fmt("max relative deviation over 10 points %.2e (tol 1e-8)", worst));
}

void pbs_agreement(Outcome& o) {
    const SystemConfig c;
    const PhysicalParams p = c.physical();
    const ReceiverGeometry g = ReceiverGeometry::centered(p);
    PbsConfig cfg;
    cfg.dt = c.pbs_dt;
    cfg.t_sim = c.pbs_t_sim;
    cfg.realizations = c.pbs_realizations;
    cfg.particles = c.pbs_particles;
    cfg.report_every = c.pbs_report_every;
    cfg.seed = c.seed;
    const double t_m = peak_time(p, g);
    const GridLayout layout = enumerate_sites(GridKind::Hexagonal, c.pitch, 6);

    for (std::size_t tx : {0u, 1u}) {
        const TxSite& site = layout.sites()[tx];
        const CirTrace tr = simulate_cir(p, g, site.x, site.y, cfg);
        auto index_of = [&](double t) {
            return static_cast<std::size_t>(std::lround(t / (cfg.dt * cfg.report_every))) - 1;
        };
        std::vector<double> times{t_m};
        for (int k = 0; k < 10; ++k) times.push_back(1.2 + 0.2 * k);
        int within = 0;
        double worst_z = 0.0;
        for (double t : times) {
            const std::size_t i = index_of(t);
            const double ref = cir(tr.times[i], site.radial_distance, p, g);
            const double z = std::abs(tr.mean_fraction[i] - ref) / tr.std_error[i];
            worst_z = std::max(worst_z, z);
            if (z <= 3.0) ++within;
        }
        const std::size_t ip = index_of(t_m);
        const double rel_peak = std::abs(tr.mean_fraction[ip] - cir(tr.times[ip], site.radial_distance, p, g)) /
                                cir(tr.times[ip], site.radial_distance, p, g);
        o.check(within == static_cast<int>(times.size()),
                "TX_" + std::to_string(tx) + ": " + std::to_string(within) + "/11 points within 3 stderr" +
                    fmt(" (max |z| %.2f, peak rel. dev. %.3f)", worst_z, rel_peak));
    }
}

void threshold_behaviour(Outcome& o) {
    // (a) noiseless, interference-free
    const unsigned theta_a = optimal_threshold(100.0, collapse_iui({}), 0.0);
    o.check(theta_a == 1, "(a) noiseless, no IUI: theta_opt = " + std::to_string(theta_a));

    // (b) N = 10 transition
    SystemConfig c;
    c.n_molecules = 10;
    const auto pitches = geometric_grid(0.1, 1.0, 61);
    const auto reports = sweep(c, SweepAxis::CellPitch, pitches);
    double transition = -1.0;
    for (std::size_t i = 1; i < reports.size(); ++i)
        if (reports[i - 1].theta_opt == 2 && reports[i].theta_opt == 1) transition = pitches[i];
    o.check(transition >= 0.58 && transition <= 0.66,
            fmt("(b) N = 10: theta 2 -> 1 first reached at c = %.3f m (window [0.58, 0.66])", transition));

    // (c) brute-force BER argmin on random desk-scale configs
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u_pitch(0.15, 1.0), u_noise(0.0, 10.0);
    std::uniform_int_distribution<int> u_nmol(10, 150), u_n(0, 2);
    const std::size_t counts[] = {6, 18, 36};
    int agree = 0;
    for (int k = 0; k < 10; ++k) {
        const ChannelSummary s = hex_summary(u_pitch(rng), counts[u_n(rng)], static_cast<unsigned>(u_nmol(rng)),
                                             u_noise(rng));
        const IuiSpectrum sp = collapse_iui(ring_basis(s));
        unsigned argmin = 0;
        double best = 2.0;
        for (unsigned th = 0; th <= 100; ++th) {
            const double ber = error_probs(th, s.mu_s, sp, s.mu_n).ber();
            if (ber < best * (1.0 - 1e-12)) {
                best = ber;
                argmin = th;
            }
        }
        if (optimal_threshold(s.mu_s, sp, s.mu_n) == argmin) ++agree;
    }
    o.check(agree == 10, "(c) theta_opt equals the BER argmin on " + std::to_string(agree) + "/10 random configs");
}

void collapse_exactness(Outcome& o) {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> u(0.01, 8.0);
    double worst_value = 0.0, worst_weight = 0.0;
    int bases = 0;
    std::function<void(int, int, std::vector<int>&)> walk = [&](int left, int max_part, std::vector<int>& parts) {
        if (left == 0) {
            std::vector<RingBasisEntry> basis;
            std::vector<double> flat;
            for (int m : parts) {
                const double v = u(rng);
                basis.push_back(RingBasisEntry{v, static_cast<std::size_t>(m)});
                flat.insert(flat.end(), m, v);
            }
            std::vector<std::pair<double, double>> got;
            for (const auto& a : collapse_iui(basis).atoms) got.emplace_back(a.value, std::exp(a.log_weight));
            const auto g = oracle::merge_values(got, 1e-12);
            const auto w = oracle::merge_values(oracle::enumerate_iui(flat), 1e-12);
            if (g.size() != w.size()) {
                worst_value = worst_weight = 1.0;
            } else {
                for (std::size_t i = 0; i < g.size(); ++i) {
                    worst_value = std::max(worst_value, std::abs(g[i].first - w[i].first));
                    worst_weight = std::max(worst_weight, std::abs(g[i].second - w[i].second));
                }
            }
            ++bases;
            return;
        }
        for (int p = std::min(left, max_part); p >= 1; --p) {
            parts.push_back(p);
            walk(left - p, p, parts);
            parts.pop_back();
        }
    };
    for (int n = 1; n <= 12; ++n) {
        std::vector<int> parts;
        walk(n, n, parts);
    }
    o.check(worst_value <= 1e-12 && worst_weight <= 1e-12,
            std::to_string(bases) + fmt(" ring bases: max value error %.1e, max weight error %.1e", worst_value,
                                        worst_weight));
}

void monte_carlo_consistency(Outcome& o) {
    struct Case {
        double pitch;
        unsigned n_mol;
        double c_noise;
        GridKind grid;
    };
    const Case cases[] = {
        {0.2, 100, 0.0, GridKind::Hexagonal},  {0.3, 100, 0.0, GridKind::Hexagonal},
        {0.5, 100, 0.0, GridKind::Hexagonal},  {0.8, 100, 5.0, GridKind::Hexagonal},
        {0.4, 10, 0.0, GridKind::Hexagonal},   {0.6, 10, 10.0, GridKind::Hexagonal},
        {0.25, 1000, 0.0, GridKind::Hexagonal}, {0.3, 50, 2.0, GridKind::Square},
        {0.5, 100, 0.0, GridKind::Square},     {0.15, 100, 0.0, GridKind::Hexagonal},
    };
    int consistent = 0, located = 0;
    std::uint64_t stream = 0;
    for (const Case& k : cases) {
        SystemConfig c;
        c.grid = k.grid;
        c.pitch = k.pitch;
        c.n_molecules = k.n_mol;
        c.noise_concentration = k.c_noise;
        const PhysicalParams p = c.physical();
        const ReceiverGeometry g = ReceiverGeometry::centered(p);
        const ChannelSummary s = summarize(p, g, enumerate_sites(c.grid, c.pitch, c.resolved_interferers()));
        const IuiSpectrum sp = collapse_iui(ring_basis(s));
        const unsigned theta = optimal_threshold(s.mu_s, sp, s.mu_n);
        const double analytic = error_probs(theta, s.mu_s, sp, s.mu_n).ber();
        McSettings mc;
        mc.samples = 100'000;
        mc.theta_max = std::max(100u, 2 * theta + 10);
        mc.seed = 1000 + stream++;
        const McResult r = run(s, mc);
        const ThresholdEstimate& at = r.per_threshold.at(theta);
        const double z = at.std_error > 0 ? std::abs(at.ber - analytic) / at.std_error : 0.0;
        const bool ok_ber = std::abs(at.ber - analytic) <= 3.0 * at.std_error;
        const bool ok_theta = std::abs(static_cast<int>(r.best.theta) - static_cast<int>(theta)) <= 1;
        consistent += ok_ber;
        located += ok_theta;
        o.detail << "    " << to_string(k.grid) << fmt(" c=%.2f N=%.0f", k.pitch, k.n_mol)
                 << fmt(" Cn=%.0f: theta_opt ", k.c_noise) << theta << ", mc best " << r.best.theta
                 << fmt(", BER analytic %.5f mc %.5f (|z| %.2f)\n", analytic, at.ber, z);
    }
    o.check(consistent == 10, std::to_string(consistent) + "/10 configs within 3 binomial stderr at theta_opt");
    o.check(located == 10, std::to_string(located) + "/10 empirical minima within theta_opt +- 1");
}

void are_qualitative(Outcome& o) {
    const auto pitches = geometric_grid(0.1, 1.0, 61);

    // unique interior maximum, N_mol ordering
    std::vector<Peak> by_n;
    for (unsigned n : {10u, 100u, 1000u}) {
        SystemConfig c;
        c.n_molecules = n;
        const auto r = sweep(c, SweepAxis::CellPitch, pitches);
        const Peak pk = peak_of(pitches, r);
        by_n.push_back(pk);
        if (n == 100) {
            int local = 0;
            for (std::size_t i = 0; i < r.size(); ++i) {
                const bool left = i == 0 || r[i].are > r[i - 1].are;
                const bool right = i + 1 == r.size() || r[i].are > r[i + 1].are;
                local += left && right;
            }
            o.check(local == 1 && pk.index > 0 && pk.index + 1 < r.size(),
                    "defaults: " + std::to_string(local) + fmt(" local maximum, c_opt = %.3f m, ARE %.3f", pk.axis,
                                                                pk.are));
        }
    }
    o.check(by_n[0].are < by_n[1].are && by_n[1].are < by_n[2].are,
            fmt("peak ARE for N = 10/100/1000: %.3f / %.3f / %.3f", by_n[0].are, by_n[1].are, by_n[2].are));
    o.check(by_n[0].axis > by_n[1].axis && by_n[1].axis > by_n[2].axis,
            fmt("c_opt for N = 10/100/1000: %.3f / %.3f / %.3f", by_n[0].axis, by_n[1].axis, by_n[2].axis));

    // noise
    std::vector<Peak> by_noise;
    for (double cn : {0.0, 5.0, 10.0}) {
        SystemConfig c;
        c.noise_concentration = cn;
        by_noise.push_back(peak_of(pitches, sweep(c, SweepAxis::CellPitch, pitches)));
    }
    o.check(by_noise[0].are > by_noise[1].are && by_noise[1].are > by_noise[2].are,
            fmt("peak ARE for C_noise = 0/5/10: %.4f / %.4f / %.4f", by_noise[0].are, by_noise[1].are,
                by_noise[2].are));
    const auto spread = [&] {
        std::size_t lo = by_noise[0].index, hi = lo;
        for (const Peak& p : by_noise) {
            lo = std::min(lo, p.index);
            hi = std::max(hi, p.index);
        }
        return hi - lo;
    }();
    o.check(spread <= 1, fmt("c_opt for C_noise = 0/5/10: %.4f / %.4f / %.4f", by_noise[0].axis, by_noise[1].axis,
                             by_noise[2].axis));

    // grid comparison and diffusion ordering at equal cell areas
    const auto areas = geometric_grid(0.01, 1.0, 41);
    std::vector<std::vector<PerfReport>> hex_by_d;
    for (double d : {0.005, 0.01, 0.05}) {
        SystemConfig hex;
        hex.diffusion = d;
        SystemConfig square = hex;
        square.grid = GridKind::Square;
        square.pitch = square_side_for_equal_area(hex.pitch);
        const auto rh = sweep(hex, SweepAxis::CellArea, areas);
        const auto rs = sweep(square, SweepAxis::CellArea, areas);
        const Peak ph = peak_of(areas, rh), ps = peak_of(areas, rs);
        o.check(ph.are >= ps.are - 1e-9, fmt("D = %.3f: peak ARE hex %.4f >= square %.4f", d, ph.are, ps.are));
        int ber_ok = 0, ber_n = 0;
        for (std::size_t i = 0; i < areas.size(); ++i) {
            if (rh[i].truncation_warning || rs[i].truncation_warning) continue;
            ++ber_n;
            ber_ok += rh[i].ber <= rs[i].ber + 1e-6;
        }
        o.detail << "    info D = " << d << ": hex BER <= square BER + 1e-6 at " << ber_ok << "/" << ber_n
                 << " untruncated areas\n";
        hex_by_d.push_back(rh);
    }
    int ordered = 0;
    for (std::size_t i = 0; i < areas.size(); ++i)
        ordered += hex_by_d[0][i].ber <= hex_by_d[1][i].ber && hex_by_d[1][i].ber <= hex_by_d[2][i].ber;
    o.check(ordered == static_cast<int>(areas.size()),
            "BER non-decreasing in D (0.005, 0.01, 0.05) at " + std::to_string(ordered) + "/" +
                std::to_string(areas.size()) + " cell areas");
}

void suboptimal_gap(Outcome& o) {
    for (double pitch : {0.1, 0.2, 0.3, 0.5, 0.8}) {
        SystemConfig c;
        c.pitch = pitch;
        const PerfReport opt = evaluate(c);
        c.threshold_mode = ThresholdMode::Suboptimal;
        const PerfReport sub = evaluate(c);
        const double gap = sub.ber - opt.ber;
        if (pitch == 0.1)
            o.check(std::abs(gap) <= 1e-3, fmt("c = 0.1 m: |BER(sub) - BER(opt)| = %.2e (tol 1e-3)", std::abs(gap)));
        else
            o.check(gap >= 0.0, fmt("c = %.1f m: BER(sub) - BER(opt) = %.2e >= 0", pitch, gap));
    }
}

void special_functions(Outcome& o) {
    double worst_pq = 0.0, worst_cdf = 0.0, worst_erf = 0.0;
    for (unsigned a = 1; a <= 20; ++a) {
        for (int i = 0; i < 20; ++i) {
            const double x = 0.5 * i + 0.01 * a;
            const double p = specfun::regularized_gamma_p(a, x), q = specfun::regularized_gamma_q(a, x);
            worst_pq = std::max(worst_pq, std::abs(p + q - 1.0));
            worst_cdf = std::max(worst_cdf, std::abs(q - oracle::poisson_cdf_below(a, x)));
        }
    }
    for (int i = 1; i <= 30; ++i) {
        const double x = 0.1 * i;
        worst_erf = std::max(worst_erf, std::abs(specfun::erf(x) - oracle::erf_quadrature(x)));
    }
    o.check(worst_pq <= 1e-12, fmt("P + Q = 1 on a 20x20 grid: max deviation %.1e", worst_pq));
    o.check(worst_cdf <= 1e-12, fmt("Q equals the Poisson CDF: max deviation %.1e", worst_cdf));
    o.check(worst_erf <= 1e-10, fmt("erf against quadrature on 0.1..3.0: max deviation %.1e", worst_erf));
}

} // namespace

int main() {
    criterion(1, "SINR_worst reproduction", 5, sinr_reproduction);
    criterion(2, "CIR equals cylinder quadrature", 30, cir_quadrature);
    criterion(3, "particle simulation agrees with the CIR", 300, pbs_agreement);
    criterion(4, "threshold behaviours", 60, threshold_behaviour);
    criterion(5, "IUI collapse equals exhaustive enumeration", 10, collapse_exactness);
    criterion(6, "Monte Carlo consistency", 120, monte_carlo_consistency);
    criterion(7, "ARE qualitative behaviour", 300, are_qualitative);
    criterion(8, "suboptimal threshold gap", 30, suboptimal_gap);
    criterion(9, "special-function suite", 5, special_functions);
    std::printf("%d of 9 criteria failed\n", failures);
    return std::min(failures, 125);
}
