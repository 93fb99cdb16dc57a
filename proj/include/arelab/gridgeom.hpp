#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace arelab {

enum class GridKind { Hexagonal, Square };

std::string_view to_string(GridKind kind);
/// Accepts "hex", "hexagonal", "square", "quad" (case-sensitive). Throws ParameterError.
GridKind parse_grid_kind(std::string_view text);

/// One transmitter site. Index 0 is the desired transmitter at the origin.
struct TxSite {
    std::size_t index = 0;
    double radial_distance = 0.0;  // m
    std::size_t ring = 0;          // distance-equivalence class, 0 for the origin
    int lattice_x = 0;             // offset coords (hex) or Cartesian integers (square)
    int lattice_y = 0;
    double x = 0.0;                // Cartesian position in the TX plane, m
    double y = 0.0;
};

/// A group of interferers sharing one distance to the reference receiver.
struct Ring {
    double distance = 0.0;
    std::size_t count = 0;
};

/// Immutable enumeration of the reference transmitter plus its nearest interferers,
/// sorted by (distance, polar angle counterclockwise from +x).
class GridLayout {
public:
    GridLayout(GridKind kind, double pitch, std::vector<TxSite> sites, std::vector<Ring> rings);

    GridKind kind() const noexcept { return kind_; }
    double pitch() const noexcept { return pitch_; }
    const std::vector<TxSite>& sites() const noexcept { return sites_; }
    /// Rings 1..R in increasing distance; ring 0 (the origin) is not listed.
    const std::vector<Ring>& rings() const noexcept { return rings_; }
    std::size_t n_interferers() const noexcept { return sites_.size() - 1; }

private:
    GridKind kind_;
    double pitch_;
    std::vector<TxSite> sites_;
    std::vector<Ring> rings_;
};

/// c * sqrt(x'^2 + y'^2 + x'y') for hexagonal offset coordinates.
double hex_distance(int xp, int yp, double c);

/// Side b of a square cell with the same area as a hexagonal cell of pitch c.
double square_side_for_equal_area(double c);

double cell_area(GridKind kind, double pitch);

/// Pitch of a grid whose cell has the given area.
double pitch_for_cell_area(GridKind kind, double area);

/// Nearest `n_interferers` sites around the origin. A distance class is never
/// split: if the n-th site shares its distance with further sites the layout is
/// extended to the end of that class, so n_interferers() may exceed the request.
GridLayout enumerate_sites(GridKind kind, double pitch, std::size_t n_interferers);

/// CSV: index,ring,x_m,y_m,distance_m
void write_layout_csv(std::ostream& out, const GridLayout& layout);

} // namespace arelab
