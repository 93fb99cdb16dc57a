#include "arelab/cli.hpp"

#include "arelab/channel.hpp"
#include "arelab/config.hpp"
#include "arelab/detection.hpp"
#include "arelab/errors.hpp"
#include "arelab/gridgeom.hpp"
#include "arelab/montecarlo.hpp"
#include "arelab/pbs.hpp"
#include "arelab/perf.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace arelab {

namespace {

struct SweepArgs {
    std::string axis;
    std::optional<double> from, to;
    std::size_t points = 0;
    std::vector<double> values;
    std::string spacing = "geometric";
};

struct Args {
    std::optional<std::string> config_path;
    std::optional<std::string> out_path;
    std::optional<std::string> write_config_path;
    std::string format = "csv";
    std::vector<std::pair<std::string, std::string>> overrides;

    // cir / pbs-validate
    std::vector<std::size_t> tx_index{0};
    double t_from = 0.0;
    std::optional<double> t_to;
    double t_step = 0.01;
    bool uca = false;

    SweepArgs sweep;

    unsigned w_max = 25;
    double step_frac = 0.02;
};

void add_key(CLI::App* app, Args& a, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option_function<std::string>(
        flag, [&a, key](const std::string& v) { a.overrides.emplace_back(key, v); }, help);
}

void add_common(CLI::App* app, Args& a) {
    app->add_option("--config", a.config_path, "Key = value config file; flags override it");
    app->add_option("--out", a.out_path, "Write CSV here instead of stdout");
    app->add_option("--format", a.format, "Output format")->check(CLI::IsMember({"csv"}));
    app->add_option("--write-config", a.write_config_path, "Also save the resolved config to this file");
    app->add_option_function<std::vector<std::string>>(
        "--set",
        [&a](const std::vector<std::string>& items) {
            for (const std::string& item : items) {
                const auto eq = item.find('=');
                if (eq == std::string::npos) throw ConfigError(item, "expected key=value");
                a.overrides.emplace_back(item.substr(0, eq), item.substr(eq + 1));
            }
        },
        "Any config key as key=value (repeatable)");

    add_key(app, a, "--seed", "seed", "RNG seed");
    add_key(app, a, "--grid", "grid", "hex | square");
    add_key(app, a, "--c", "pitch", "Cell centre distance of the selected grid, m");
    add_key(app, a, "--n-int", "n_interferers", "Interferers in the analytic model (0 = 36 hex / 24 square)");
    add_key(app, a, "--nmol", "n_molecules", "Molecules released per 1-symbol");
    add_key(app, a, "--diff", "diffusion", "Diffusion coefficient, m^2/s");
    add_key(app, a, "--v", "velocity", "Flow velocity, m/s");
    add_key(app, a, "--d", "distance", "TX plane to RX centre distance, m");
    add_key(app, a, "--rx-length", "rx_length", "Receiver length, m");
    add_key(app, a, "--rx-radius", "rx_radius", "Receiver radius, m, or auto");
    add_key(app, a, "--cnoise", "noise_concentration", "Background noise concentration, 1/m^3");
    add_key(app, a, "--kmax", "k_max", "Last term of the CIR series");
    add_key(app, a, "--horizon", "peak_horizon", "Peak search horizon, s");
    add_key(app, a, "--threshold-mode", "threshold_mode", "optimal | suboptimal");
    add_key(app, a, "--theta-cap", "theta_cap", "Threshold search cap (0 = automatic)");
    add_key(app, a, "--samples", "mc_samples", "Monte Carlo samples");
    add_key(app, a, "--theta-max", "mc_theta_max", "Largest threshold tallied by Monte Carlo");
    add_key(app, a, "--mc-int", "mc_interferers", "Interferers in Monte Carlo (0 = 1260 hex / 840 square)");
    add_key(app, a, "--mode", "mc_mode", "stochastic | semi-analytic");
    add_key(app, a, "--dt", "pbs_dt", "Particle simulation time step, s");
    add_key(app, a, "--t-sim", "pbs_t_sim", "Particle simulation horizon, s");
    add_key(app, a, "--realizations", "pbs_realizations", "Particle simulation realizations");
    add_key(app, a, "--particles", "pbs_particles", "Particles per release");
    add_key(app, a, "--report-every", "pbs_report_every", "Steps between recorded samples");
}

void add_sweep(CLI::App* app, Args& a) {
    app->add_option("--axis", a.sweep.axis, "Swept quantity")
        ->check(CLI::IsMember({"cell_pitch", "cell_area", "n_molecules", "noise_concentration", "diffusion"}));
    app->add_option("--from", a.sweep.from, "First axis value");
    app->add_option("--to", a.sweep.to, "Last axis value");
    app->add_option_function<double>("--c-from", [&a](double v) { a.sweep.axis = "cell_pitch"; a.sweep.from = v; },
                                     "Sweep cell pitch from this value, m");
    app->add_option_function<double>("--c-to", [&a](double v) { a.sweep.axis = "cell_pitch"; a.sweep.to = v; },
                                     "Sweep cell pitch to this value, m");
    app->add_option("--points", a.sweep.points, "Number of axis values");
    app->add_option("--values", a.sweep.values, "Explicit axis values (overrides from/to/points)")->delimiter(',');
    app->add_option("--spacing", a.sweep.spacing, "geometric | linear")->check(CLI::IsMember({"geometric", "linear"}));
}

std::vector<double> sweep_values(const SweepArgs& s, double from, double to, std::size_t points) {
    if (!s.values.empty()) return s.values;
    from = s.from.value_or(from);
    to = s.to.value_or(to);
    points = s.points ? s.points : points;
    if (s.spacing == "geometric") return geometric_grid(from, to, points);
    std::vector<double> v(points);
    for (std::size_t i = 0; i < points; ++i)
        v[i] = points == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(points - 1);
    return v;
}

void write_header(std::ostream& os, const std::string& command, const SystemConfig& config) {
    os << "# arelab " << ARELAB_VERSION << '\n';
    os << "# command = " << command << '\n';
    os << "# seed = " << config.seed << '\n';
    write_config(os, config, "# ");
}

std::ostream& csv(std::ostream& os) {
    os.precision(12);
    return os;
}

void write_sweep_rows(std::ostream& os, const std::vector<double>& values, const std::vector<PerfReport>& reports,
                      const std::string& prefix) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        const PerfReport& r = reports[i];
        os << prefix << values[i] << ',' << r.theta_opt << ',' << r.theta_sub << ',' << r.errors.p << ','
           << r.errors.q << ',' << r.ber << ',' << r.link_rate << ',' << r.spatial_rate << ',' << r.are << ','
           << r.sinr_worst << ',' << (r.truncation_warning ? 1 : 0) << '\n';
    }
}

constexpr const char* kSweepColumns =
    "axis_value,theta_opt,theta_sub,p,q,ber,link_rate_bits,spatial_rate_per_m2,are_bits_per_m2,sinr_worst,"
    "truncation_warning";

GridLayout layout_covering(const SystemConfig& c, std::size_t max_index) {
    return enumerate_sites(c.grid, c.pitch, std::max<std::size_t>(max_index, c.resolved_interferers()));
}

void cmd_grid(std::ostream& os, const SystemConfig& c) {
    write_layout_csv(os, enumerate_sites(c.grid, c.pitch, c.resolved_interferers()));
}

void cmd_cir(std::ostream& os, const SystemConfig& c, const Args& a) {
    const PhysicalParams params = c.physical();
    const ReceiverGeometry geom = ReceiverGeometry::centered(params);
    const std::size_t max_index = *std::max_element(a.tx_index.begin(), a.tx_index.end());
    const GridLayout layout = layout_covering(c, max_index);
    const double t_to = a.t_to.value_or(c.peak_horizon);
    if (!(a.t_step > 0.0) || !(t_to > a.t_from)) throw ParameterError("cir: need t_step > 0 and t_to > t_from");

    os << "t_s";
    for (std::size_t i : a.tx_index) os << ",cir_tx" << i;
    if (a.uca)
        for (std::size_t i : a.tx_index) os << ",uca_tx" << i;
    os << '\n';
    const auto n = static_cast<std::size_t>(std::floor((t_to - a.t_from) / a.t_step + 1e-9));
    for (std::size_t j = 0; j <= n; ++j) {
        const double t = a.t_from + a.t_step * static_cast<double>(j);
        os << t;
        for (std::size_t i : a.tx_index)
            os << ',' << cir_or_zero(t, layout.sites()[i].radial_distance, params, geom, c.k_max);
        if (a.uca)
            for (std::size_t i : a.tx_index)
                os << ',' << (t > 0.0 ? cir_uca(t, layout.sites()[i].radial_distance, params, geom) : 0.0);
        os << '\n';
    }
}

void cmd_detect(std::ostream& os, const SystemConfig& c) {
    const PhysicalParams params = c.physical();
    const ReceiverGeometry geom = ReceiverGeometry::centered(params);
    const GridLayout layout = enumerate_sites(c.grid, c.pitch, c.resolved_interferers());
    const ChannelSummary s = summarize(params, geom, layout, c.k_max, c.peak_search());
    const IuiSpectrum spectrum = collapse_iui(ring_basis(s));
    const DetectorSpec spec = design_detector(s, spectrum, c.theta_cap);
    const SuboptimalThreshold sub = suboptimal_threshold(s.mu_s, s.cbar_sum(), s.mu_n);
    const ErrorPair e_opt = error_probs(spec.theta_opt, s.mu_s, spectrum, s.mu_n);
    const ErrorPair e_sub = error_probs(spec.theta_sub, s.mu_s, spectrum, s.mu_n);

    os << "t_m_s,mu_s,cbar_sum,mu_n,n_interferers,iui_atoms,theta_opt,theta_sub,theta_sub_raw,threshold_set_size,"
          "sinr_worst,ber_opt,ber_sub\n";
    os << s.t_m << ',' << s.mu_s << ',' << s.cbar_sum() << ',' << s.mu_n << ',' << s.n_interferers() << ','
       << spectrum.atoms.size() << ',' << spec.theta_opt << ',' << spec.theta_sub << ',' << sub.raw << ','
       << spec.threshold_set_size << ',' << spec.sinr_worst << ',' << e_opt.ber() << ',' << e_sub.ber() << '\n';
}

void cmd_sweep(std::ostream& os, const SystemConfig& c, const Args& a, const std::string& default_axis, double from,
               double to, std::size_t points) {
    const SweepAxis axis = parse_sweep_axis(a.sweep.axis.empty() ? default_axis : a.sweep.axis);
    const std::vector<double> values = sweep_values(a.sweep, from, to, points);
    os << "# axis = " << to_string(axis) << '\n';
    os << kSweepColumns << '\n';
    write_sweep_rows(os, values, sweep(c, axis, values), "");
}

void cmd_grid_compare(std::ostream& os, const SystemConfig& c, const Args& a) {
    const SweepAxis axis = parse_sweep_axis(a.sweep.axis.empty() ? "cell_area" : a.sweep.axis);
    if (axis == SweepAxis::CellPitch) throw ParameterError("grid-compare: use cell_area, pitches differ between grids");
    const std::vector<double> values = sweep_values(a.sweep, 0.01, 1.0, 40);
    os << "# axis = " << to_string(axis) << '\n';
    os << "grid," << kSweepColumns << '\n';
    for (GridKind kind : {GridKind::Hexagonal, GridKind::Square}) {
        SystemConfig g = c;
        g.grid = kind;
        // Keep the cell area of the base config when another axis is swept.
        if (kind != c.grid) g.pitch = pitch_for_cell_area(kind, cell_area(c.grid, c.pitch));
        write_sweep_rows(os, values, sweep(g, axis, values), std::string(to_string(kind)) + ",");
    }
}

void cmd_mc(std::ostream& os, const SystemConfig& c) {
    const ChannelSummary s = validation_summary(c);
    McSettings mc;
    mc.samples = c.mc_samples;
    mc.theta_max = c.mc_theta_max;
    mc.mode = c.mc_mode;
    mc.seed = c.seed;
    const McResult r = run(s, mc);

    const PerfReport analytic = evaluate(c);
    os << "# mc_interferers = " << s.n_interferers() << '\n';
    os << "# analytic_theta_opt = " << analytic.theta_opt << '\n';
    os << "# analytic_ber = " << analytic.ber << '\n';
    os << "theta,ber_hat,stderr,p_hat,q_hat\n";
    for (const ThresholdEstimate& e : r.per_threshold)
        os << e.theta << ',' << e.ber << ',' << e.std_error << ',' << e.p << ',' << e.q << '\n';
    os << "best=" << r.best.theta << ',' << r.best.ber << ',' << r.best.std_error << ',' << r.best.p << ','
       << r.best.q << '\n';
}

void cmd_pbs(std::ostream& os, const SystemConfig& c, const Args& a) {
    const PhysicalParams params = c.physical();
    const ReceiverGeometry geom = ReceiverGeometry::centered(params);
    if (a.tx_index.size() != 1) throw ParameterError("give exactly one --tx-index");
    const GridLayout layout = layout_covering(c, a.tx_index.front());
    const TxSite& tx = layout.sites()[a.tx_index.front()];

    PbsConfig cfg;
    cfg.dt = c.pbs_dt;
    cfg.t_sim = c.pbs_t_sim;
    cfg.realizations = c.pbs_realizations;
    cfg.particles = c.pbs_particles;
    cfg.report_every = c.pbs_report_every;
    cfg.seed = c.seed;
    const CirTrace trace = simulate_cir(params, geom, tx.x, tx.y, cfg);

    os << "# tx_index = " << tx.index << '\n';
    os << "t_s,cir_hat,stderr,cir_analytic\n";
    for (std::size_t k = 0; k < trace.times.size(); ++k)
        os << trace.times[k] << ',' << trace.mean_fraction[k] << ',' << trace.std_error[k] << ','
           << cir(trace.times[k], tx.radial_distance, params, geom, c.k_max) << '\n';
}

void cmd_optimize_radius(std::ostream& os, const SystemConfig& c, const Args& a) {
    const RadiusOptimum best = optimize_radius(c, a.w_max, a.step_frac);
    os << "# best_w = " << best.w << '\n';
    os << "# best_rx_radius_m = " << best.rx_radius << '\n';
    os << "w,rx_radius_m,theta_used,p,q,ber,link_rate_bits,are_bits_per_m2\n";
    for (const RadiusCandidate& cand : best.candidates) {
        const PerfReport& r = cand.report;
        os << cand.w << ',' << cand.rx_radius << ',' << r.theta_used << ',' << r.errors.p << ',' << r.errors.q << ','
           << r.ber << ',' << r.link_rate << ',' << r.are << '\n';
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multi-link molecular communication: CIR, detection, BER and area rate efficiency", "arelab"};
    app.require_subcommand(1);
    Args a;

    auto* grid = app.add_subcommand("grid", "Transmitter layout as CSV");
    auto* cir_cmd = app.add_subcommand("cir", "Analytic CIR traces");
    auto* detect = app.add_subcommand("detect", "Sampling time, means and detection thresholds");
    auto* ber_sweep = app.add_subcommand("ber-sweep", "BER and ARE over one parameter (default: cell area)");
    auto* are_sweep = app.add_subcommand("are-sweep", "BER and ARE over one parameter (default: cell pitch)");
    auto* grid_cmp = app.add_subcommand("grid-compare", "Hexagonal vs square grid at equal cell areas");
    auto* mc = app.add_subcommand("mc-validate", "Monte Carlo BER per threshold");
    auto* pbs = app.add_subcommand("pbs-validate", "Particle-based CIR against the analytic CIR");
    auto* opt = app.add_subcommand("optimize-radius", "Receiver radius search maximising the ARE");

    for (CLI::App* sub : {grid, cir_cmd, detect, ber_sweep, are_sweep, grid_cmp, mc, pbs, opt}) add_common(sub, a);
    for (CLI::App* sub : {ber_sweep, are_sweep, grid_cmp}) add_sweep(sub, a);
    for (CLI::App* sub : {cir_cmd, pbs}) sub->add_option("--tx-index", a.tx_index, "Transmitter indices (0 = paired TX)")->delimiter(',');
    cir_cmd->add_option("--t-from", a.t_from, "First time, s");
    cir_cmd->add_option("--t-to", a.t_to, "Last time, s (default: peak horizon)");
    cir_cmd->add_option("--t-step", a.t_step, "Time step, s");
    cir_cmd->add_flag("--uca", a.uca, "Add uniform-concentration columns");
    opt->add_option("--w-max", a.w_max, "Largest radius index");
    opt->add_option("--step-frac", a.step_frac, "Radius step as a fraction of the pitch");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    CLI::App* chosen = app.get_subcommands().front();
    SystemConfig config;
    try {
        if (a.config_path) config = load_config_file(*a.config_path);
        for (const auto& [key, value] : a.overrides) apply_config_entry(config, key, value);
        config.validate();
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    const std::string name = chosen->get_name();
    std::ostringstream body;
    csv(body);
    try {
        write_header(body, name, config);
        if (chosen == grid) cmd_grid(body, config);
        else if (chosen == cir_cmd) cmd_cir(body, config, a);
        else if (chosen == detect) cmd_detect(body, config);
        else if (chosen == ber_sweep) cmd_sweep(body, config, a, "cell_area", 0.01, 1.0, 40);
        else if (chosen == are_sweep) cmd_sweep(body, config, a, "cell_pitch", 0.1, 1.0, 60);
        else if (chosen == grid_cmp) cmd_grid_compare(body, config, a);
        else if (chosen == mc) cmd_mc(body, config);
        else if (chosen == pbs) cmd_pbs(body, config, a);
        else cmd_optimize_radius(body, config, a);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ParameterError& e) {
        err << "error: " << name << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << name << ": " << e.what() << '\n';
        return 1;
    }

    if (a.write_config_path) {
        std::ofstream cf(*a.write_config_path);
        write_config(cf, config);
        if (!cf) {
            err << "error: cannot write '" << *a.write_config_path << "'\n";
            return 1;
        }
    }
    if (a.out_path) {
        std::ofstream f(*a.out_path, std::ios::binary);
        f << body.str();
        if (!f) {
            err << "error: cannot write '" << *a.out_path << "'\n";
            return 1;
        }
    } else {
        out << body.str();
    }
    return 0;
}

} // namespace arelab
