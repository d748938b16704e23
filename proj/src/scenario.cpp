#include "airybeam/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace airybeam {

ArraySpec ArraySpec::ula(std::size_t n, double pitch, double center_x) {
    ArraySpec a;
    a.kind = Kind::ula;
    a.nx = n;
    a.ny = 1;
    a.pitch = pitch;
    a.center_x = center_x;
    if (n < 1 || !(pitch > 0.0)) throw ConfigError("ArraySpec: need count >= 1 and pitch > 0");
    return a;
}

ArraySpec ArraySpec::upa(std::size_t nx, std::size_t ny, double pitch, double center_x,
                         double center_y) {
    ArraySpec a;
    a.kind = Kind::upa;
    a.nx = nx;
    a.ny = ny;
    a.pitch = pitch;
    a.center_x = center_x;
    a.center_y = center_y;
    if (nx < 1 || ny < 1 || !(pitch > 0.0)) throw ConfigError("ArraySpec: need counts >= 1 and pitch > 0");
    return a;
}

std::vector<std::array<double, 3>> element_positions(const ArraySpec& array) {
    std::vector<std::array<double, 3>> pos;
    pos.reserve(array.count());
    const double ox = -(static_cast<double>(array.nx) - 1.0) / 2.0 * array.pitch;
    const double oy = -(static_cast<double>(array.ny) - 1.0) / 2.0 * array.pitch;
    for (std::size_t j = 0; j < array.ny; ++j)
        for (std::size_t i = 0; i < array.nx; ++i)
            pos.push_back({array.center_x + ox + static_cast<double>(i) * array.pitch,
                           array.center_y + oy + static_cast<double>(j) * array.pitch, 0.0});
    return pos;
}

BlockageSpec BlockageSpec::ula_edge(double z, double edge, bool side_below, double attenuation) {
    BlockageSpec b;
    b.z = z;
    b.attenuation = attenuation;
    if (side_below)
        b.x_max = edge;
    else
        b.x_min = edge;
    return b;
}

void Scenario::validate() const {
    if (!(distance > 0.0)) throw ConfigError("Scenario: distance must be positive");
    if (!(lambda > 0.0)) throw ConfigError("Scenario: wavelength must be positive");
    if (!(step > 0.0)) throw ConfigError("Scenario: propagation step must be positive");
    if (grid.padding < 1) throw ConfigError("Scenario: padding factor must be >= 1");
    for (const auto& b : blockages) {
        if (!(b.z > 0.0) || !(b.z < distance))
            throw GeometryError("BlockageSpec: obstacle plane must lie strictly inside (0, D)");
        if (b.attenuation < 0.0 || b.attenuation >= 1.0)
            throw ConfigError("BlockageSpec: attenuation must be in [0, 1)");
    }
}

namespace {

std::size_t next_pow2(double n) {
    std::size_t p = 2;
    while (static_cast<double>(p) < n) p <<= 1;
    return p;
}

// Smallest centered power-of-two grid covering both apertures, the nearby
// obstacle edges, and a two-aperture margin for trajectory excursions.
// Obstacle bounds far outside the link region are sentinels for "covers
// everything on that side" and must not blow the window up.
double derived_half_span(const Scenario& s) {
    const double half_ap = std::max({s.tx.aperture_x() / 2.0 + std::abs(s.tx.center_x),
                                     s.rx.aperture_x() / 2.0 + std::abs(s.rx.center_x),
                                     s.tx.aperture_y() / 2.0 + std::abs(s.tx.center_y),
                                     s.rx.aperture_y() / 2.0 + std::abs(s.rx.center_y)});
    double half = half_ap;
    for (const auto& b : s.blockages) {
        for (const auto& bound : {b.x_min, b.x_max, b.y_min, b.y_max})
            if (bound) half = std::max(half, std::min(std::abs(*bound), 3.0 * half_ap));
    }
    return 2.0 * half + 16.0 * s.lambda;
}

} // namespace

Grid1D Scenario::make_grid_1d() const {
    const double pitch = grid.pitch > 0.0 ? grid.pitch : lambda / 2.0;
    const double span = grid.span > 0.0 ? grid.span : 2.0 * derived_half_span(*this);
    return Grid1D::centered(next_pow2(span / pitch), pitch);
}

Grid2D Scenario::make_grid_2d() const {
    const double pitch = grid.pitch > 0.0 ? grid.pitch : lambda / 2.0;
    const double span = grid.span > 0.0 ? grid.span : 2.0 * derived_half_span(*this);
    const std::size_t n = next_pow2(span / pitch);
    return Grid2D::centered(n, n, pitch, pitch);
}

std::array<double, 2> los_tunnel_x(const Scenario& s, double z) {
    const double t = z / s.distance;
    const double tx_lo = s.tx.center_x - s.tx.aperture_x() / 2.0;
    const double tx_hi = s.tx.center_x + s.tx.aperture_x() / 2.0;
    const double rx_lo = s.rx.center_x - s.rx.aperture_x() / 2.0;
    const double rx_hi = s.rx.center_x + s.rx.aperture_x() / 2.0;
    return {tx_lo + t * (rx_lo - tx_lo), tx_hi + t * (rx_hi - tx_hi)};
}

std::array<double, 2> los_tunnel_y(const Scenario& s, double z) {
    const double t = z / s.distance;
    const double tx_lo = s.tx.center_y - s.tx.aperture_y() / 2.0;
    const double tx_hi = s.tx.center_y + s.tx.aperture_y() / 2.0;
    const double rx_lo = s.rx.center_y - s.rx.aperture_y() / 2.0;
    const double rx_hi = s.rx.center_y + s.rx.aperture_y() / 2.0;
    return {tx_lo + t * (rx_lo - tx_lo), tx_hi + t * (rx_hi - tx_hi)};
}

namespace {

const BlockageSpec& single_blockage(const Scenario& s) {
    if (s.blockages.size() != 1)
        throw GeometryError("blockage ratio requires exactly one obstacle");
    const auto& b = s.blockages.front();
    if (!(b.z > 0.0) || !(b.z < s.distance))
        throw GeometryError("blockage ratio: obstacle plane outside (0, D)");
    return b;
}

// Length of [box] ∩ [lo, hi] for a possibly unbounded box interval.
double overlap(std::optional<double> b_lo, std::optional<double> b_hi, double lo, double hi) {
    const double a = b_lo ? std::max(*b_lo, lo) : lo;
    const double b = b_hi ? std::min(*b_hi, hi) : hi;
    return std::max(0.0, b - a);
}

} // namespace

double blockage_ratio_ula(const Scenario& s) {
    const auto& b = single_blockage(s);
    const auto [lo, hi] = los_tunnel_x(s, b.z);
    if (!(hi > lo)) throw GeometryError("blockage ratio: degenerate LoS tunnel");
    return std::clamp(overlap(b.x_min, b.x_max, lo, hi) / (hi - lo), 0.0, 1.0);
}

double blockage_ratio_upa(const Scenario& s) {
    const auto& b = single_blockage(s);
    const auto [xlo, xhi] = los_tunnel_x(s, b.z);
    const auto [ylo, yhi] = los_tunnel_y(s, b.z);
    const double area = (xhi - xlo) * (yhi - ylo);
    if (!(area > 0.0)) throw GeometryError("blockage ratio: degenerate LoS tunnel");
    const double cut = overlap(b.x_min, b.x_max, xlo, xhi) * overlap(b.y_min, b.y_max, ylo, yhi);
    return std::clamp(cut / area, 0.0, 1.0);
}

namespace {

// Obstacle planes are matched exactly up to rounding in the z bookkeeping.
bool plane_matches(double z_b, double z, double scale) {
    return std::abs(z_b - z) <= 1e-9 * std::max(1.0, scale);
}

} // namespace

std::vector<double> blockage_mask(const Scenario& s, double z, const Grid1D& grid) {
    std::vector<double> mask(grid.n, 1.0);
    for (const auto& b : s.blockages) {
        if (!plane_matches(b.z, z, s.distance)) continue;
        for (std::size_t i = 0; i < grid.n; ++i)
            if (b.contains(grid.coord(i))) mask[i] *= b.attenuation;
    }
    return mask;
}

std::vector<double> blockage_mask(const Scenario& s, double z, const Grid2D& grid) {
    std::vector<double> mask(grid.size(), 1.0);
    for (const auto& b : s.blockages) {
        if (!plane_matches(b.z, z, s.distance)) continue;
        for (std::size_t j = 0; j < grid.ny; ++j)
            for (std::size_t i = 0; i < grid.nx; ++i)
                if (b.contains(grid.coord_x(i), grid.coord_y(j)))
                    mask[j * grid.nx + i] *= b.attenuation;
    }
    return mask;
}

std::vector<double> blockage_mask_interval(const Scenario& s, double z_lo, double z_hi,
                                           const Grid1D& grid) {
    std::vector<double> mask(grid.n, 1.0);
    for (const auto& b : s.blockages) {
        if (b.z <= z_lo || b.z > z_hi) continue;
        for (std::size_t i = 0; i < grid.n; ++i)
            if (b.contains(grid.coord(i))) mask[i] *= b.attenuation;
    }
    return mask;
}

std::vector<double> blockage_mask_interval(const Scenario& s, double z_lo, double z_hi,
                                           const Grid2D& grid) {
    std::vector<double> mask(grid.size(), 1.0);
    for (const auto& b : s.blockages) {
        if (b.z <= z_lo || b.z > z_hi) continue;
        for (std::size_t j = 0; j < grid.ny; ++j)
            for (std::size_t i = 0; i < grid.nx; ++i)
                if (b.contains(grid.coord_x(i), grid.coord_y(j)))
                    mask[j * grid.nx + i] *= b.attenuation;
    }
    return mask;
}

} // namespace airybeam
