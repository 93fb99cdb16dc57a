#include "arelab/config.hpp"

#include "arelab/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace arelab {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
    const std::string s(text);
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(std::string(key), "expected a real number, got '" + s + "'");
    }
}

template <typename Int>
Int parse_unsigned(std::string_view key, std::string_view text) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError(std::string(key), "expected a non-negative integer, got '" + std::string(text) + "'");
    return v;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

std::string_view to_string(ThresholdMode mode) {
    return mode == ThresholdMode::Optimal ? "optimal" : "suboptimal";
}

std::string_view to_string(McMode mode) {
    return mode == McMode::Stochastic ? "stochastic" : "semi-analytic";
}

std::size_t SystemConfig::resolved_interferers() const {
    if (n_interferers != 0) return n_interferers;
    return grid == GridKind::Hexagonal ? 36 : 24;
}

std::size_t SystemConfig::resolved_mc_interferers() const {
    if (mc_interferers != 0) return mc_interferers;
    return grid == GridKind::Hexagonal ? 1260 : 840;
}

double SystemConfig::resolved_rx_radius() const {
    return rx_radius ? *rx_radius : 0.5 * pitch;
}

PhysicalParams SystemConfig::physical() const {
    PhysicalParams p;
    p.diffusion = diffusion;
    p.velocity = velocity;
    p.distance = distance;
    p.rx_radius = resolved_rx_radius();
    p.rx_length = rx_length;
    p.n_molecules = n_molecules;
    p.noise_concentration = noise_concentration;
    return p;
}

PeakSearch SystemConfig::peak_search() const {
    PeakSearch s;
    s.horizon = peak_horizon;
    s.tolerance = peak_tolerance;
    return s;
}

void SystemConfig::validate() const {
    auto need = [](bool ok, const char* key, const char* what) {
        if (!ok) throw ConfigError(key, what);
    };
    need(pitch > 0.0, "pitch", "must be positive");
    need(diffusion > 0.0, "diffusion", "must be positive");
    need(velocity >= 0.0, "velocity", "must be non-negative");
    need(distance > 0.0, "distance", "must be positive");
    need(rx_length > 0.0, "rx_length", "must be positive");
    need(!rx_radius || *rx_radius > 0.0, "rx_radius", "must be positive");
    need(n_molecules >= 1, "n_molecules", "must be >= 1");
    need(noise_concentration >= 0.0, "noise_concentration", "must be non-negative");
    need(peak_horizon > 0.0, "peak_horizon", "must be positive");
    need(peak_tolerance > 0.0, "peak_tolerance", "must be positive");
    need(mc_samples >= 1, "mc_samples", "must be >= 1");
    need(mc_theta_max >= 1, "mc_theta_max", "must be >= 1");
    need(pbs_dt > 0.0, "pbs_dt", "must be positive");
    need(pbs_t_sim > pbs_dt, "pbs_t_sim", "must exceed pbs_dt");
    need(pbs_realizations >= 1, "pbs_realizations", "must be >= 1");
    need(pbs_particles >= 1, "pbs_particles", "must be >= 1");
    need(pbs_report_every >= 1, "pbs_report_every", "must be >= 1");
}

std::vector<std::pair<std::string, std::string>> config_entries(const SystemConfig& c) {
    return {
        {"grid", std::string(to_string(c.grid))},
        {"pitch", format_double(c.pitch)},
        {"n_interferers", std::to_string(c.n_interferers)},
        {"diffusion", format_double(c.diffusion)},
        {"velocity", format_double(c.velocity)},
        {"distance", format_double(c.distance)},
        {"rx_length", format_double(c.rx_length)},
        {"rx_radius", c.rx_radius ? format_double(*c.rx_radius) : std::string("auto")},
        {"n_molecules", std::to_string(c.n_molecules)},
        {"noise_concentration", format_double(c.noise_concentration)},
        {"k_max", std::to_string(c.k_max)},
        {"peak_horizon", format_double(c.peak_horizon)},
        {"peak_tolerance", format_double(c.peak_tolerance)},
        {"threshold_mode", std::string(to_string(c.threshold_mode))},
        {"theta_cap", std::to_string(c.theta_cap)},
        {"mc_samples", std::to_string(c.mc_samples)},
        {"mc_theta_max", std::to_string(c.mc_theta_max)},
        {"mc_interferers", std::to_string(c.mc_interferers)},
        {"mc_mode", std::string(to_string(c.mc_mode))},
        {"pbs_dt", format_double(c.pbs_dt)},
        {"pbs_t_sim", format_double(c.pbs_t_sim)},
        {"pbs_realizations", std::to_string(c.pbs_realizations)},
        {"pbs_particles", std::to_string(c.pbs_particles)},
        {"pbs_report_every", std::to_string(c.pbs_report_every)},
        {"seed", std::to_string(c.seed)},
    };
}

void apply_config_entry(SystemConfig& c, std::string_view key, std::string_view value) {
    const std::string k(key);
    if (key == "grid") {
        try {
            c.grid = parse_grid_kind(value);
        } catch (const ParameterError& e) {
            throw ConfigError(k, e.what());
        }
    } else if (key == "pitch") c.pitch = parse_double(key, value);
    else if (key == "n_interferers") c.n_interferers = parse_unsigned<std::size_t>(key, value);
    else if (key == "diffusion") c.diffusion = parse_double(key, value);
    else if (key == "velocity") c.velocity = parse_double(key, value);
    else if (key == "distance") c.distance = parse_double(key, value);
    else if (key == "rx_length") c.rx_length = parse_double(key, value);
    else if (key == "rx_radius") {
        if (value == "auto") c.rx_radius.reset();
        else c.rx_radius = parse_double(key, value);
    } else if (key == "n_molecules") c.n_molecules = parse_unsigned<unsigned>(key, value);
    else if (key == "noise_concentration") c.noise_concentration = parse_double(key, value);
    else if (key == "k_max") c.k_max = parse_unsigned<unsigned>(key, value);
    else if (key == "peak_horizon") c.peak_horizon = parse_double(key, value);
    else if (key == "peak_tolerance") c.peak_tolerance = parse_double(key, value);
    else if (key == "threshold_mode") {
        if (value == "optimal") c.threshold_mode = ThresholdMode::Optimal;
        else if (value == "suboptimal") c.threshold_mode = ThresholdMode::Suboptimal;
        else throw ConfigError(k, "expected optimal or suboptimal, got '" + std::string(value) + "'");
    } else if (key == "theta_cap") c.theta_cap = parse_unsigned<unsigned>(key, value);
    else if (key == "mc_samples") c.mc_samples = parse_unsigned<std::uint64_t>(key, value);
    else if (key == "mc_theta_max") c.mc_theta_max = parse_unsigned<unsigned>(key, value);
    else if (key == "mc_interferers") c.mc_interferers = parse_unsigned<std::size_t>(key, value);
    else if (key == "mc_mode") {
        if (value == "stochastic") c.mc_mode = McMode::Stochastic;
        else if (value == "semi-analytic") c.mc_mode = McMode::SemiAnalytic;
        else throw ConfigError(k, "expected stochastic or semi-analytic, got '" + std::string(value) + "'");
    } else if (key == "pbs_dt") c.pbs_dt = parse_double(key, value);
    else if (key == "pbs_t_sim") c.pbs_t_sim = parse_double(key, value);
    else if (key == "pbs_realizations") c.pbs_realizations = parse_unsigned<std::size_t>(key, value);
    else if (key == "pbs_particles") c.pbs_particles = parse_unsigned<std::size_t>(key, value);
    else if (key == "pbs_report_every") c.pbs_report_every = parse_unsigned<std::size_t>(key, value);
    else if (key == "seed") c.seed = parse_unsigned<std::uint64_t>(key, value);
    else throw ConfigError(k, "unknown key");
}

SystemConfig read_config(std::istream& in, SystemConfig base) {
    std::string line;
    while (std::getline(in, line)) {
        std::string_view view = trim(line);
        if (view.empty() || view.front() == '#' || view.front() == ';' || view.front() == '[') continue;
        const auto comment = view.find_first_of("#;");
        if (comment != std::string_view::npos) view = trim(view.substr(0, comment));
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) throw ConfigError(std::string(view), "expected 'key = value'");
        apply_config_entry(base, trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
    }
    return base;
}

SystemConfig load_config_file(const std::string& path, SystemConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    return read_config(in, std::move(base));
}

void write_config(std::ostream& out, const SystemConfig& config, std::string_view line_prefix) {
    for (const auto& [key, value] : config_entries(config)) out << line_prefix << key << " = " << value << '\n';
}

} // namespace arelab
