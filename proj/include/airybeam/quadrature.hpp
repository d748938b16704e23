#pragma once

#include <cmath>
#include <limits>
#include <complex>
#include <cstddef>

#include "airybeam/errors.hpp"

namespace airybeam {

/// Adaptive Gauss-Kronrod (G7/K15) integration of a complex-valued integrand
/// over [a, b] to an absolute tolerance. Used by the diffraction-integral
/// oracles; deliberately simple rather than fast.
///
/// Throws NumericalError when the subdivision budget is exhausted.
template <typename Real = double, typename F>
std::complex<Real> integrate_gk(F&& f, Real a, Real b, Real abs_tol, int max_depth = 48) {
    using C = std::complex<Real>;

    // K15 nodes on [0,1] of |x|, shared with the embedded G7 rule at odd indices.
    static const Real xk[8] = {
        Real(0.991455371120813L), Real(0.949107912342759L), Real(0.864864423359769L),
        Real(0.741531185599394L), Real(0.586087235467691L), Real(0.405845151377397L),
        Real(0.207784955007898L), Real(0.0L)};
    static const Real wk[8] = {
        Real(0.022935322010529L), Real(0.063092092629979L), Real(0.104790010322250L),
        Real(0.140653259715525L), Real(0.169004726639267L), Real(0.190350578064785L),
        Real(0.204432940075298L), Real(0.209482141084728L)};
    static const Real wg[4] = {
        Real(0.129484966168870L), Real(0.279705391489277L), Real(0.381830050505119L),
        Real(0.417959183673469L)};

    struct Rule {
        C kronrod;
        Real err;
        Real scale; ///< L1 magnitude of the panel, the roundoff floor reference
    };
    auto eval = [&](Real lo, Real hi) -> Rule {
        const Real c = (lo + hi) / Real(2);
        const Real h = (hi - lo) / Real(2);
        C gk(0, 0), gg(0, 0);
        Real l1(0);
        for (int i = 0; i < 8; ++i) {
            const C fp = f(c + h * xk[i]);
            const C fm = (i == 7) ? fp : C(f(c - h * xk[i]));
            const C pair = (i == 7) ? fp : fp + fm;
            gk += wk[i] * pair;
            l1 += wk[i] * std::abs(pair);
            if (i % 2 == 1) gg += wg[i / 2] * pair;
        }
        gk *= h;
        gg *= h;
        l1 *= h;
        return {gk, std::abs(gk - gg), l1};
    };

    // Explicit stack of pending intervals with their tolerance share.
    struct Item {
        Real lo, hi, tol;
        int depth;
    };
    constexpr std::size_t kStackCap = 20000;
    Item stack[64];
    int top = 0;
    stack[top++] = {a, b, abs_tol, 0};
    C total(0, 0);
    std::size_t used = 0;
    // The tabulated weights carry ~15 digits, which caps the per-panel
    // precision regardless of Real.
    const Real eps = std::max(std::numeric_limits<Real>::epsilon(), Real(1e-15));
    while (top > 0) {
        const Item it = stack[--top];
        const Rule r = eval(it.lo, it.hi);
        // Converged, or subdividing can no longer beat rounding noise.
        const Real floor = Real(50) * eps * r.scale;
        if (r.err <= it.tol || r.err <= floor || it.depth >= max_depth) {
            if (it.depth >= max_depth && r.err > Real(64) * it.tol && r.err > floor)
                throw NumericalError("integrate_gk: quadrature failed to converge");
            total += r.kronrod;
            continue;
        }
        if (++used > kStackCap) throw NumericalError("integrate_gk: subdivision budget exhausted");
        if (top + 2 > 64) throw NumericalError("integrate_gk: interval stack overflow");
        const Real mid = (it.lo + it.hi) / Real(2);
        stack[top++] = {it.lo, mid, it.tol / Real(2), it.depth + 1};
        stack[top++] = {mid, it.hi, it.tol / Real(2), it.depth + 1};
    }
    return total;
}

} // namespace airybeam
