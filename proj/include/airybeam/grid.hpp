#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "airybeam/errors.hpp"

namespace airybeam {

using Complex = std::complex<double>;

namespace detail {
inline bool is_pow2(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }
}

/// Uniform 1D sample grid. Sample i sits at origin + i*dx.
/// Lengths are restricted to powers of two so every field can be fed to the
/// radix-friendly DFT path without repacking.
struct Grid1D {
    std::size_t n = 0;
    double dx = 0.0;
    double origin = 0.0;

    Grid1D() = default;
    Grid1D(std::size_t n_, double dx_, double origin_) : n(n_), dx(dx_), origin(origin_) {
        if (!detail::is_pow2(n)) throw ConfigError("Grid1D: length must be a power of two >= 2");
        if (!(dx > 0.0)) throw ConfigError("Grid1D: pitch must be positive");
    }

    /// Symmetric grid whose cell centers straddle x = 0.
    static Grid1D centered(std::size_t n, double dx) {
        return Grid1D(n, dx, -(static_cast<double>(n) / 2.0 - 0.5) * dx);
    }

    double coord(std::size_t i) const { return origin + static_cast<double>(i) * dx; }
    double span() const { return static_cast<double>(n) * dx; }
};

struct Grid2D {
    std::size_t nx = 0, ny = 0;
    double dx = 0.0, dy = 0.0;
    double origin_x = 0.0, origin_y = 0.0;

    Grid2D() = default;
    Grid2D(std::size_t nx_, std::size_t ny_, double dx_, double dy_, double ox, double oy)
        : nx(nx_), ny(ny_), dx(dx_), dy(dy_), origin_x(ox), origin_y(oy) {
        if (!detail::is_pow2(nx) || !detail::is_pow2(ny))
            throw ConfigError("Grid2D: dimensions must be powers of two >= 2");
        if (!(dx > 0.0) || !(dy > 0.0)) throw ConfigError("Grid2D: pitches must be positive");
    }

    static Grid2D centered(std::size_t nx, std::size_t ny, double dx, double dy) {
        return Grid2D(nx, ny, dx, dy, -(static_cast<double>(nx) / 2.0 - 0.5) * dx,
                      -(static_cast<double>(ny) / 2.0 - 0.5) * dy);
    }

    double coord_x(std::size_t i) const { return origin_x + static_cast<double>(i) * dx; }
    double coord_y(std::size_t j) const { return origin_y + static_cast<double>(j) * dy; }
    std::size_t size() const { return nx * ny; }
};

/// Complex scalar field sampled on a 1D grid at axial position z.
struct Field1D {
    Grid1D grid;
    double z = 0.0;
    std::vector<Complex> values;

    Field1D() = default;
    Field1D(const Grid1D& g, double z_) : grid(g), z(z_), values(g.n, Complex(0.0, 0.0)) {}
    Field1D(const Grid1D& g, double z_, std::vector<Complex> v) : grid(g), z(z_), values(std::move(v)) {
        if (values.size() != grid.n) throw ConfigError("Field1D: value count does not match grid");
    }
};

/// Complex scalar field sampled on a 2D grid at axial position z.
/// Values are row-major: index = iy * nx + ix.
struct Field2D {
    Grid2D grid;
    double z = 0.0;
    std::vector<Complex> values;

    Field2D() = default;
    Field2D(const Grid2D& g, double z_) : grid(g), z(z_), values(g.size(), Complex(0.0, 0.0)) {}
    Field2D(const Grid2D& g, double z_, std::vector<Complex> v) : grid(g), z(z_), values(std::move(v)) {
        if (values.size() != grid.size()) throw ConfigError("Field2D: value count does not match grid");
    }

    Complex& at(std::size_t ix, std::size_t iy) { return values[iy * grid.nx + ix]; }
    const Complex& at(std::size_t ix, std::size_t iy) const { return values[iy * grid.nx + ix]; }
};

} // namespace airybeam
