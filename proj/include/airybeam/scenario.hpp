#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "airybeam/grid.hpp"

namespace airybeam {

// Wavelengths are derived with the round 3e8 m/s convention so printed
// geometry like the 140 GHz half-wave pitch reproduces exactly.
inline constexpr double kSpeedOfLight = 3.0e8;

inline double wavelength_from_frequency(double f_hz) { return kSpeedOfLight / f_hz; }

/// Antenna array on a transverse plane (normal +z), centered and symmetric:
/// element m sits at center + (m - (N-1)/2) * d per axis.
struct ArraySpec {
    enum class Kind { ula, upa };

    Kind kind = Kind::ula;
    std::size_t nx = 1; ///< element count along x (ULA count)
    std::size_t ny = 1; ///< element count along y (1 for ULA)
    double pitch = 0.0;
    double center_x = 0.0;
    double center_y = 0.0;

    static ArraySpec ula(std::size_t n, double pitch, double center_x = 0.0);
    static ArraySpec upa(std::size_t nx, std::size_t ny, double pitch, double center_x = 0.0,
                         double center_y = 0.0);

    std::size_t count() const { return nx * ny; }
    /// Physical aperture per axis, (N-1)*d.
    double aperture_x() const { return static_cast<double>(nx - 1) * pitch; }
    double aperture_y() const { return static_cast<double>(ny - 1) * pitch; }
};

/// Element coordinates (x, y, z-offset-from-array-plane = 0), row-major for
/// UPA (y index slow).
std::vector<std::array<double, 3>> element_positions(const ArraySpec& array);

/// Absorbing screen, infinitesimally thin at z. The obstacle occupies the
/// axis-aligned box given by whichever bounds are present; absent bounds are
/// unbounded. A ULA half-plane obstacle uses only the x bounds.
struct BlockageSpec {
    double z = 0.0;
    double attenuation = 0.0; ///< amplitude factor in [0, 1)
    std::optional<double> x_min, x_max;
    std::optional<double> y_min, y_max;

    /// Half-plane below/above an edge coordinate (side_below: occupies x <= edge).
    static BlockageSpec ula_edge(double z, double edge, bool side_below, double attenuation = 0.0);

    bool contains(double x, double y) const {
        if (x_min && x < *x_min) return false;
        if (x_max && x > *x_max) return false;
        if (y_min && y < *y_min) return false;
        if (y_max && y > *y_max) return false;
        return true;
    }
    bool contains(double x) const { return contains(x, 0.0); }
};

struct GridSettings {
    double span = 0.0;  ///< transverse extent in meters per axis; 0 = derive from geometry
    double pitch = 0.0; ///< transverse sample pitch; 0 = lambda/2
    int padding = 2;    ///< zero-padding factor applied inside propagation
};

struct Scenario {
    ArraySpec tx;
    ArraySpec rx;
    double distance = 0.0; ///< link length D; tx plane z=0, rx plane z=D
    double lambda = 0.0;
    std::vector<BlockageSpec> blockages;
    GridSettings grid;
    double step = 5e-3; ///< propagation step length

    void validate() const;

    /// Concrete transverse grids honoring the settings (power-of-two, pitch
    /// <= lambda/2, span covering apertures, obstacles and margin).
    Grid1D make_grid_1d() const;
    Grid2D make_grid_2d() const;
};

/// Cross-section of the line-of-sight tunnel (convex hull of the two
/// apertures) at axial position z: {x_lo, x_hi} / plus {y_lo, y_hi} for UPA.
std::array<double, 2> los_tunnel_x(const Scenario& s, double z);
std::array<double, 2> los_tunnel_y(const Scenario& s, double z);

/// Obstructed fraction of the tunnel at the obstacle plane, in [0, 1].
/// Requires exactly one blockage.
double blockage_ratio_ula(const Scenario& s);
double blockage_ratio_upa(const Scenario& s);

/// Amplitude mask sampled at cell centers for obstacles sitting exactly at
/// plane z (1 everywhere else). No anti-aliasing at the boundary.
std::vector<double> blockage_mask(const Scenario& s, double z, const Grid1D& grid);
std::vector<double> blockage_mask(const Scenario& s, double z, const Grid2D& grid);

/// Same, for all obstacles with z_b in (z_lo, z_hi]; the stepping loop uses
/// this to apply each screen exactly once.
std::vector<double> blockage_mask_interval(const Scenario& s, double z_lo, double z_hi,
                                           const Grid1D& grid);
std::vector<double> blockage_mask_interval(const Scenario& s, double z_lo, double z_hi,
                                           const Grid2D& grid);

} // namespace airybeam
