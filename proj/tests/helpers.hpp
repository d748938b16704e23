#pragma once

// Shared test utilities: independent oracles and small numeric helpers the
// suites use to cross-check the library. Everything here deliberately avoids
// the implementation paths it is used to verify.

#include <cmath>
#include <complex>
#include <numbers>
#include <functional>
#include <random>
#include <vector>

#include "airybeam/grid.hpp"
#include "airybeam/quadrature.hpp"

namespace testutil {

using Cd = std::complex<double>;
using Cl = std::complex<long double>;

// ---------------------------------------------------------------------------
// Adaptive Simpson in extended precision. Exact rational weights, so the
// reachable accuracy is set by the long-double mantissa alone; used where
// the tabulated Gauss-Kronrod weights would cap precision too early.
namespace detail {
inline Cl simpson_rec(const std::function<Cl(long double)>& f, long double a, long double b,
                      Cl fa, Cl fm, Cl fb, Cl whole, long double tol, int depth) {
    const long double m = (a + b) / 2.0L;
    const long double lm = (a + m) / 2.0L, rm = (m + b) / 2.0L;
    const Cl flm = f(lm), frm = f(rm);
    const Cl left = (m - a) / 6.0L * (fa + 4.0L * flm + fm);
    const Cl right = (b - m) / 6.0L * (fm + 4.0L * frm + fb);
    const Cl delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0L * tol) return left + right + delta / 15.0L;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0L, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0L, depth - 1);
}
} // namespace detail

inline Cl adaptive_simpson(const std::function<Cl(long double)>& f, long double a, long double b,
                           long double tol) {
    const long double m = (a + b) / 2.0L;
    const Cl fa = f(a), fm = f(m), fb = f(b);
    const Cl whole = (b - a) / 6.0L * (fa + 4.0L * fm + fb);
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

// ---------------------------------------------------------------------------
// Airy oracle: quadrature of the defining integral along rays rotated into
// the decay directions (pi/6 and 5pi/6), in extended precision.
//   Ai(xi) = (1/2pi) [ e^{j pi/6} I(pi/6) - e^{j 5pi/6} I(5pi/6) ],
//   I(phi) = integral_0^T exp(-t^3/3 + j xi t e^{j phi}) dt.
inline Cd airy_oracle(Cd xi_in) {
    const Cl xi(static_cast<long double>(xi_in.real()), static_cast<long double>(xi_in.imag()));
    const long double pi = std::numbers::pi_v<long double>;
    const Cl j(0.0L, 1.0L);

    // Truncation where t^3/3 dominates any |xi| t growth by > 45 e-folds.
    const long double m = std::abs(xi);
    long double T = 4.0L;
    while (T * T * T / 3.0L - m * T < 45.0L) T += 0.5L;

    // The checks need ~1e-10 absolute; the extra term keeps the request
    // above the rounding floor when the integrand peaks at
    // exp((2/3)(m/2)^{3/2}) before cancelling down to O(1).
    const long double peak = std::exp((2.0L / 3.0L) * std::pow(m / 2.0L, 1.5L));
    const long double tol = 1e-11L + 1e-16L * peak;

    auto ray = [&](long double phi) {
        const Cl dir = std::exp(j * phi);
        auto f = [&](long double t) { return std::exp(-t * t * t / 3.0L + j * xi * t * dir); };
        return dir * adaptive_simpson(f, 0.0L, T, tol);
    };
    const Cl val = (ray(pi / 6.0L) - ray(5.0L * pi / 6.0L)) / (2.0L * pi);
    return Cd(static_cast<double>(val.real()), static_cast<double>(val.imag()));
}

// ---------------------------------------------------------------------------
// Peak location with three-point parabolic refinement on |field|^2.
inline double find_peak_1d(const airybeam::Field1D& f, double x_center, double half_window) {
    const auto& g = f.grid;
    std::size_t best = 0;
    double best_val = -1.0;
    bool found = false;
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.coord(i);
        if (std::abs(x - x_center) > half_window) continue;
        const double v = std::norm(f.values[i]);
        if (v > best_val) {
            best_val = v;
            best = i;
            found = true;
        }
    }
    if (!found) return x_center;
    if (best == 0 || best + 1 >= g.n) return g.coord(best);
    const double ym = std::norm(f.values[best - 1]);
    const double y0 = std::norm(f.values[best]);
    const double yp = std::norm(f.values[best + 1]);
    const double denom = ym - 2.0 * y0 + yp;
    const double shift = denom != 0.0 ? 0.5 * (ym - yp) / denom : 0.0;
    return g.coord(best) + shift * g.dx;
}

struct Peak2D {
    double x = 0.0, y = 0.0, value = 0.0;
};

inline Peak2D find_peak_2d(const airybeam::Field2D& f, double xc, double yc, double half_window) {
    const auto& g = f.grid;
    std::size_t bi = 0, bj = 0;
    double best = -1.0;
    for (std::size_t jy = 0; jy < g.ny; ++jy) {
        if (std::abs(g.coord_y(jy) - yc) > half_window) continue;
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            if (std::abs(g.coord_x(ix) - xc) > half_window) continue;
            const double v = std::norm(f.at(ix, jy));
            if (v > best) {
                best = v;
                bi = ix;
                bj = jy;
            }
        }
    }
    Peak2D p;
    p.value = best;
    auto refine = [&](double ym, double y0, double yp) {
        const double denom = ym - 2.0 * y0 + yp;
        return denom != 0.0 ? 0.5 * (ym - yp) / denom : 0.0;
    };
    p.x = g.coord_x(bi);
    p.y = g.coord_y(bj);
    if (bi > 0 && bi + 1 < g.nx)
        p.x += refine(std::norm(f.at(bi - 1, bj)), best, std::norm(f.at(bi + 1, bj))) * g.dx;
    if (bj > 0 && bj + 1 < g.ny)
        p.y += refine(std::norm(f.at(bi, bj - 1)), best, std::norm(f.at(bi, bj + 1))) * g.dy;
    return p;
}

// ---------------------------------------------------------------------------
// Power iteration on H^H H: dominant right singular vector and sigma_max.
struct PowerIterationResult {
    std::vector<Cd> w_t;
    std::vector<Cd> w_r;
    double sigma = 0.0;
};

inline PowerIterationResult power_iteration_svd(const std::vector<Cd>& h, std::size_t n_r,
                                                std::size_t n_t, int iters = 500) {
    auto mul = [&](const std::vector<Cd>& v) { // y = H v
        std::vector<Cd> y(n_r, Cd(0, 0));
        for (std::size_t r = 0; r < n_r; ++r)
            for (std::size_t t = 0; t < n_t; ++t) y[r] += h[r * n_t + t] * v[t];
        return y;
    };
    auto mul_h = [&](const std::vector<Cd>& v) { // x = H^H v
        std::vector<Cd> x(n_t, Cd(0, 0));
        for (std::size_t r = 0; r < n_r; ++r)
            for (std::size_t t = 0; t < n_t; ++t) x[t] += std::conj(h[r * n_t + t]) * v[r];
        return x;
    };
    auto normalize = [](std::vector<Cd>& v) {
        double p = 0.0;
        for (auto& c : v) p += std::norm(c);
        const double inv = 1.0 / std::sqrt(p);
        for (auto& c : v) c *= inv;
        return std::sqrt(p);
    };

    std::vector<Cd> v(n_t);
    for (std::size_t i = 0; i < n_t; ++i) v[i] = Cd(1.0 + static_cast<double>(i % 7), 0.3);
    normalize(v);
    double sigma = 0.0;
    for (int it = 0; it < iters; ++it) {
        auto y = mul(v);
        v = mul_h(y);
        sigma = std::sqrt(normalize(v));
    }
    auto y = mul(v);
    PowerIterationResult res;
    res.sigma = 0.0;
    for (auto& c : y) res.sigma += std::norm(c);
    res.sigma = std::sqrt(res.sigma);
    normalize(y);
    res.w_t = std::move(v);
    res.w_r = std::move(y);
    // Match the library's phase convention.
    auto fix = [](std::vector<Cd>& w) {
        for (const auto& c : w)
            if (std::abs(c) > 1e-14) {
                const Cd rot = std::conj(c) / std::abs(c);
                for (auto& x : w) x *= rot;
                return;
            }
    };
    fix(res.w_t);
    fix(res.w_r);
    return res;
}

// ---------------------------------------------------------------------------
// Quasi-random Halton points in [0, 1).
inline double halton(std::size_t index, unsigned base) {
    double f = 1.0, r = 0.0;
    std::size_t i = index + 1;
    while (i > 0) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

// Deterministic RNG for property-style tests.
inline std::mt19937& rng() {
    static std::mt19937 gen(0x5eed1234u);
    return gen;
}

inline double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng());
}

} // namespace testutil
