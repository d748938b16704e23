#include "airybeam/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "airybeam/fft.hpp"

namespace airybeam {

Complex transfer_function(double fx, double fy, double dz, double lambda, EvanescentPolicy policy) {
    const double arg = 1.0 - lambda * lambda * (fx * fx + fy * fy);
    const double scale = 2.0 * std::numbers::pi * dz / lambda;
    if (arg >= 0.0) return std::polar(1.0, scale * std::sqrt(arg));
    if (policy == EvanescentPolicy::zero) return Complex(0.0, 0.0);
    return Complex(std::exp(-scale * std::sqrt(-arg)), 0.0);
}

namespace {

// Input-power fraction in the outer 10% of the frequency band; above 1% the
// sampling is too coarse for the content and results will alias.
constexpr double kOuterBandFraction = 0.10;
constexpr double kAliasPowerLimit = 0.01;

void note_outer_band(PropagationReport* report, double outer, double total) {
    if (!report || total <= 0.0) return;
    report->outer_band_power_fraction = outer / total;
    if (report->outer_band_power_fraction > kAliasPowerLimit) report->aliasing_warning = true;
}

// Largest spatial frequency whose ray stays inside a window of full width W
// over a hop of length dz: sin(atan((W/2)/dz)) / lambda. Components beyond
// it would wrap around the circular domain and corrupt the interior.
double wrap_free_limit(double window, double dz, double lambda) {
    const double half = window / 2.0;
    return half / (std::sqrt(dz * dz + half * half) * lambda);
}

// Raised-cosine roll-off over the outer 30% of the wrap-free cone; a hard
// spectral edge would ring across the whole window.
double wrap_taper(double f, double f_wrap) {
    const double a = std::abs(f);
    const double knee = 0.7 * f_wrap;
    if (a <= knee) return 1.0;
    if (a >= f_wrap) return 0.0;
    const double t = (a - knee) / (f_wrap - knee);
    const double c = std::cos(0.5 * std::numbers::pi * t);
    return c * c;
}

} // namespace

Field1D propagate_free(const Field1D& field, double dz, double lambda,
                       const PropagationSettings& settings, PropagationReport* report) {
    if (settings.padding < 1) throw ConfigError("propagate_free: padding factor must be >= 1");
    const std::size_t n = field.grid.n;
    const std::size_t np = n * static_cast<std::size_t>(settings.padding);
    const std::size_t off = (np - n) / 2;

    std::vector<Complex> buf(np, Complex(0.0, 0.0));
    std::copy(field.values.begin(), field.values.end(), buf.begin() + static_cast<std::ptrdiff_t>(off));
    detail::fft_inplace(buf.data(), np, -1);

    const double f_outer = 0.5 / field.grid.dx * (1.0 - kOuterBandFraction);
    const double f_wrap = settings.band_limit
                              ? wrap_free_limit(static_cast<double>(np) * field.grid.dx, dz, lambda)
                              : std::numeric_limits<double>::infinity();
    double outer_power = 0.0, total_power = 0.0;
    for (std::size_t k = 0; k < np; ++k) {
        const double f = detail::frequency(k, np, field.grid.dx);
        const double p = std::norm(buf[k]);
        total_power += p;
        if (std::abs(f) > f_outer) outer_power += p;
        buf[k] *= transfer_function(f, 0.0, dz, lambda, settings.evanescent);
        if (settings.band_limit) buf[k] *= wrap_taper(f, f_wrap);
    }
    note_outer_band(report, outer_power, total_power);

    detail::fft_inplace(buf.data(), np, +1);
    Field1D out(field.grid, field.z + dz);
    const double scale = 1.0 / static_cast<double>(np);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = buf[off + i] * scale;
    return out;
}

Field2D propagate_free(const Field2D& field, double dz, double lambda,
                       const PropagationSettings& settings, PropagationReport* report) {
    if (settings.padding < 1) throw ConfigError("propagate_free: padding factor must be >= 1");
    const std::size_t nx = field.grid.nx, ny = field.grid.ny;
    const std::size_t px = nx * static_cast<std::size_t>(settings.padding);
    const std::size_t py = ny * static_cast<std::size_t>(settings.padding);
    const std::size_t offx = (px - nx) / 2, offy = (py - ny) / 2;

    std::vector<Complex> buf(px * py, Complex(0.0, 0.0));
    for (std::size_t j = 0; j < ny; ++j)
        std::copy(field.values.begin() + static_cast<std::ptrdiff_t>(j * nx),
                  field.values.begin() + static_cast<std::ptrdiff_t>((j + 1) * nx),
                  buf.begin() + static_cast<std::ptrdiff_t>((j + offy) * px + offx));
    detail::fft2_inplace(buf.data(), px, py, -1);

    const double fx_outer = 0.5 / field.grid.dx * (1.0 - kOuterBandFraction);
    const double fy_outer = 0.5 / field.grid.dy * (1.0 - kOuterBandFraction);
    const double inf = std::numeric_limits<double>::infinity();
    const double fx_wrap = settings.band_limit
                               ? wrap_free_limit(static_cast<double>(px) * field.grid.dx, dz, lambda)
                               : inf;
    const double fy_wrap = settings.band_limit
                               ? wrap_free_limit(static_cast<double>(py) * field.grid.dy, dz, lambda)
                               : inf;
    double outer_power = 0.0, total_power = 0.0;
    for (std::size_t j = 0; j < py; ++j) {
        const double fy = detail::frequency(j, py, field.grid.dy);
        for (std::size_t i = 0; i < px; ++i) {
            const double fx = detail::frequency(i, px, field.grid.dx);
            Complex& v = buf[j * px + i];
            const double p = std::norm(v);
            total_power += p;
            if (std::abs(fx) > fx_outer || std::abs(fy) > fy_outer) outer_power += p;
            v *= transfer_function(fx, fy, dz, lambda, settings.evanescent);
            if (settings.band_limit) v *= wrap_taper(fx, fx_wrap) * wrap_taper(fy, fy_wrap);
        }
    }
    note_outer_band(report, outer_power, total_power);

    detail::fft2_inplace(buf.data(), px, py, +1);
    Field2D out(field.grid, field.z + dz);
    const double scale = 1.0 / static_cast<double>(px * py);
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) out.values[j * nx + i] = buf[(j + offy) * px + offx + i] * scale;
    return out;
}

namespace {

template <typename FieldT, typename GridT>
std::vector<FieldT> propagate_blocked_impl(const FieldT& start, double z_end, const Scenario& s,
                                           StepOutput output, const GridT& grid,
                                           const PropagationSettings* settings_in) {
    s.validate();
    if (!(z_end > start.z)) throw ConfigError("propagate_blocked: z_end must exceed the field's z");
    const PropagationSettings settings =
        settings_in ? *settings_in : PropagationSettings::from(s);

    std::vector<FieldT> trace;
    FieldT cur = start;

    auto apply_masks = [&](double z_lo, double z_hi) {
        const auto mask = blockage_mask_interval(s, z_lo, z_hi, grid);
        for (std::size_t i = 0; i < mask.size(); ++i) cur.values[i] *= mask[i];
    };

    if (output == StepOutput::final_only) {
        // Free-space hops compose exactly, so jump screen to screen.
        std::vector<double> planes;
        for (const auto& b : s.blockages)
            if (b.z > cur.z && b.z <= z_end) planes.push_back(b.z);
        std::sort(planes.begin(), planes.end());
        planes.erase(std::unique(planes.begin(), planes.end()), planes.end());
        for (double zp : planes) {
            if (zp > cur.z) cur = propagate_free(cur, zp - cur.z, s.lambda, settings);
            const auto mask = blockage_mask(s, zp, grid);
            for (std::size_t i = 0; i < mask.size(); ++i) cur.values[i] *= mask[i];
        }
        if (z_end > cur.z) cur = propagate_free(cur, z_end - cur.z, s.lambda, settings);
        trace.push_back(std::move(cur));
        return trace;
    }

    const double span = z_end - start.z;
    const auto n_steps = static_cast<std::size_t>(std::ceil(span / settings.step - 1e-9));
    double z_prev = start.z;
    for (std::size_t k = 1; k <= n_steps; ++k) {
        const double z_next = start.z + span * static_cast<double>(k) / static_cast<double>(n_steps);
        cur = propagate_free(cur, z_next - z_prev, s.lambda, settings);
        cur.z = z_next; // keep stations exact despite accumulated rounding
        apply_masks(z_prev, z_next);
        trace.push_back(cur);
        z_prev = z_next;
    }
    return trace;
}

} // namespace

std::vector<Field1D> propagate_blocked(const Field1D& field, double z_end, const Scenario& s,
                                       StepOutput output, const PropagationSettings* settings) {
    return propagate_blocked_impl(field, z_end, s, output, field.grid, settings);
}

std::vector<Field2D> propagate_blocked(const Field2D& field, double z_end, const Scenario& s,
                                       StepOutput output, const PropagationSettings* settings) {
    return propagate_blocked_impl(field, z_end, s, output, field.grid, settings);
}

Complex field_at_point(const Field1D& field, double x) {
    const auto& g = field.grid;
    const double t = (x - g.origin) / g.dx;
    if (!(t >= 0.0) || !(t <= static_cast<double>(g.n - 1)))
        throw RangeError("field_at_point: x outside grid span");
    const auto i0 = static_cast<std::size_t>(std::min(t, static_cast<double>(g.n - 2)));
    const double frac = t - static_cast<double>(i0);
    return field.values[i0] * (1.0 - frac) + field.values[i0 + 1] * frac;
}

Complex field_at_point(const Field2D& field, double x, double y) {
    const auto& g = field.grid;
    const double tx = (x - g.origin_x) / g.dx;
    const double ty = (y - g.origin_y) / g.dy;
    if (!(tx >= 0.0) || !(tx <= static_cast<double>(g.nx - 1)) || !(ty >= 0.0) ||
        !(ty <= static_cast<double>(g.ny - 1)))
        throw RangeError("field_at_point: point outside grid span");
    const auto i0 = static_cast<std::size_t>(std::min(tx, static_cast<double>(g.nx - 2)));
    const auto j0 = static_cast<std::size_t>(std::min(ty, static_cast<double>(g.ny - 2)));
    const double fx = tx - static_cast<double>(i0);
    const double fy = ty - static_cast<double>(j0);
    const Complex v00 = field.at(i0, j0), v10 = field.at(i0 + 1, j0);
    const Complex v01 = field.at(i0, j0 + 1), v11 = field.at(i0 + 1, j0 + 1);
    return v00 * (1.0 - fx) * (1.0 - fy) + v10 * fx * (1.0 - fy) + v01 * (1.0 - fx) * fy +
           v11 * fx * fy;
}

std::vector<Complex> field_at_points(const Field1D& field, std::span<const double> xs) {
    std::vector<Complex> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(field_at_point(field, x));
    return out;
}

std::vector<Complex> field_at_points(const Field2D& field,
                                     std::span<const std::array<double, 2>> pts) {
    std::vector<Complex> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(field_at_point(field, p[0], p[1]));
    return out;
}

Field1D inject_weights(const ArraySpec& array, std::span<const Complex> weights, const Grid1D& grid) {
    if (weights.size() != array.count())
        throw ConfigError("inject_weights: weight count does not match the array");
    Field1D f(grid, 0.0);
    const auto pos = element_positions(array);
    for (std::size_t e = 0; e < pos.size(); ++e) {
        const double t = (pos[e][0] - grid.origin) / grid.dx;
        const auto i = static_cast<std::ptrdiff_t>(std::lround(t));
        if (i < 0 || i >= static_cast<std::ptrdiff_t>(grid.n))
            throw RangeError("inject_weights: element outside grid span");
        f.values[static_cast<std::size_t>(i)] += weights[e];
    }
    return f;
}

Field2D inject_weights(const ArraySpec& array, std::span<const Complex> weights, const Grid2D& grid) {
    if (weights.size() != array.count())
        throw ConfigError("inject_weights: weight count does not match the array");
    Field2D f(grid, 0.0);
    const auto pos = element_positions(array);
    for (std::size_t e = 0; e < pos.size(); ++e) {
        const auto i = static_cast<std::ptrdiff_t>(std::lround((pos[e][0] - grid.origin_x) / grid.dx));
        const auto j = static_cast<std::ptrdiff_t>(std::lround((pos[e][1] - grid.origin_y) / grid.dy));
        if (i < 0 || i >= static_cast<std::ptrdiff_t>(grid.nx) || j < 0 ||
            j >= static_cast<std::ptrdiff_t>(grid.ny))
            throw RangeError("inject_weights: element outside grid span");
        f.values[static_cast<std::size_t>(j) * grid.nx + static_cast<std::size_t>(i)] += weights[e];
    }
    return f;
}

double band_limited_power(const Field1D& field, double lambda) {
    Field1D spec = dft_forward(field);
    double power = 0.0;
    for (std::size_t k = 0; k < spec.values.size(); ++k) {
        const double f = detail::frequency(k, spec.values.size(), field.grid.dx);
        if (lambda * lambda * f * f <= 1.0) power += std::norm(spec.values[k]);
    }
    return power / static_cast<double>(spec.values.size());
}

double band_limited_power(const Field2D& field, double lambda) {
    Field2D spec = dft_forward(field);
    double power = 0.0;
    for (std::size_t j = 0; j < field.grid.ny; ++j) {
        const double fy = detail::frequency(j, field.grid.ny, field.grid.dy);
        for (std::size_t i = 0; i < field.grid.nx; ++i) {
            const double fx = detail::frequency(i, field.grid.nx, field.grid.dx);
            if (lambda * lambda * (fx * fx + fy * fy) <= 1.0)
                power += std::norm(spec.values[j * field.grid.nx + i]);
        }
    }
    return power / static_cast<double>(field.grid.size());
}

} // namespace airybeam
