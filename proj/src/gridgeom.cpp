#include "arelab/gridgeom.hpp"

#include "arelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

namespace arelab {

namespace {

void require_positive_pitch(double pitch, const char* what) {
    if (!(pitch > 0.0) || !std::isfinite(pitch))
        throw ParameterError(std::string(what) + ": pitch must be positive, got " + std::to_string(pitch));
}

struct Candidate {
    long long norm;  // squared distance in units of pitch^2, exact
    double angle;
    int lx, ly;
    double x, y;
};

long long lattice_norm(GridKind kind, int a, int b) {
    const long long la = a, lb = b;
    return kind == GridKind::Hexagonal ? la * la + lb * lb + la * lb : la * la + lb * lb;
}

void to_cartesian(GridKind kind, int a, int b, double pitch, double& x, double& y) {
    if (kind == GridKind::Hexagonal) {
        x = pitch * (std::numbers::sqrt3 / 2.0) * a;
        y = pitch * (b + 0.5 * a);
    } else {
        x = pitch * a;
        y = pitch * b;
    }
}

std::vector<Candidate> scan_box(GridKind kind, double pitch, int half_width) {
    std::vector<Candidate> out;
    out.reserve(static_cast<std::size_t>(2 * half_width + 1) * (2 * half_width + 1));
    for (int a = -half_width; a <= half_width; ++a) {
        for (int b = -half_width; b <= half_width; ++b) {
            if (a == 0 && b == 0) continue;
            Candidate c{lattice_norm(kind, a, b), 0.0, a, b, 0.0, 0.0};
            to_cartesian(kind, a, b, pitch, c.x, c.y);
            c.angle = std::atan2(c.y, c.x);
            if (c.angle < 0.0) c.angle += 2.0 * std::numbers::pi;
            out.push_back(c);
        }
    }
    std::sort(out.begin(), out.end(), [](const Candidate& l, const Candidate& r) {
        return l.norm != r.norm ? l.norm < r.norm : l.angle < r.angle;
    });
    return out;
}

} // namespace

std::string_view to_string(GridKind kind) {
    return kind == GridKind::Hexagonal ? "hex" : "square";
}

GridKind parse_grid_kind(std::string_view text) {
    if (text == "hex" || text == "hexagonal") return GridKind::Hexagonal;
    if (text == "square" || text == "quad") return GridKind::Square;
    throw ParameterError("unknown grid kind '" + std::string(text) + "' (expected hex or square)");
}

GridLayout::GridLayout(GridKind kind, double pitch, std::vector<TxSite> sites, std::vector<Ring> rings)
    : kind_(kind), pitch_(pitch), sites_(std::move(sites)), rings_(std::move(rings)) {}

double hex_distance(int xp, int yp, double c) {
    require_positive_pitch(c, "hex_distance");
    return c * std::sqrt(static_cast<double>(lattice_norm(GridKind::Hexagonal, xp, yp)));
}

double square_side_for_equal_area(double c) {
    require_positive_pitch(c, "square_side_for_equal_area");
    return c * std::sqrt(std::numbers::sqrt3 / 2.0);
}

double cell_area(GridKind kind, double pitch) {
    require_positive_pitch(pitch, "cell_area");
    return kind == GridKind::Hexagonal ? (std::numbers::sqrt3 / 2.0) * pitch * pitch : pitch * pitch;
}

double pitch_for_cell_area(GridKind kind, double area) {
    if (!(area > 0.0)) throw ParameterError("pitch_for_cell_area: area must be positive");
    return kind == GridKind::Hexagonal ? std::sqrt(area / (std::numbers::sqrt3 / 2.0)) : std::sqrt(area);
}

GridLayout enumerate_sites(GridKind kind, double pitch, std::size_t n_interferers) {
    require_positive_pitch(pitch, "enumerate_sites");
    if (n_interferers == 0) throw ParameterError("enumerate_sites: need at least one interferer");

    // Radius estimate from the cell density, then grow the box until it provably
    // contains every site up to the selected distance.
    const double est_radius = pitch * std::sqrt(static_cast<double>(n_interferers) / std::numbers::pi) + pitch;
    int half_width = static_cast<int>(std::ceil(1.5 * est_radius / pitch)) + 2;
    std::vector<Candidate> cand;
    std::size_t take = 0;
    for (;;) {
        cand = scan_box(kind, pitch, half_width);
        if (cand.size() > n_interferers) {
            take = n_interferers;
            while (take < cand.size() && cand[take].norm == cand[take - 1].norm) ++take;
            const double max_radius = pitch * std::sqrt(static_cast<double>(cand[take - 1].norm));
            const int needed = static_cast<int>(std::ceil(1.5 * max_radius / pitch)) + 2;
            if (needed <= half_width && take < cand.size()) break;
            half_width = std::max(needed, half_width + 1);
        } else {
            half_width *= 2;
        }
    }

    std::vector<TxSite> sites;
    sites.reserve(take + 1);
    sites.push_back(TxSite{});
    std::vector<Ring> rings;
    long long current_norm = -1;
    for (std::size_t i = 0; i < take; ++i) {
        const Candidate& c = cand[i];
        if (c.norm != current_norm) {
            current_norm = c.norm;
            rings.push_back(Ring{pitch * std::sqrt(static_cast<double>(c.norm)), 0});
        }
        ++rings.back().count;
        sites.push_back(TxSite{i + 1, rings.back().distance, rings.size(), c.lx, c.ly, c.x, c.y});
    }
    return GridLayout(kind, pitch, std::move(sites), std::move(rings));
}

void write_layout_csv(std::ostream& out, const GridLayout& layout) {
    out << "index,ring,x_m,y_m,distance_m\n";
    const auto old_precision = out.precision(12);
    for (const TxSite& s : layout.sites())
        out << s.index << ',' << s.ring << ',' << s.x << ',' << s.y << ',' << s.radial_distance << '\n';
    out.precision(old_precision);
}

} // namespace arelab
