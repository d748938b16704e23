#include "airybeam/airy.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "airybeam/errors.hpp"

namespace airybeam {
namespace {

using Cd = std::complex<double>;

constexpr double kEvaluationRadius = 40.0;
// Maclaurin / asymptotic handover; validated against the defining-integral
// oracle in the test suite.
constexpr double kSeriesRadius = 6.0;

constexpr double kAiZero = 0.35502805388781723926;   // Ai(0)
constexpr double kAiPrimeZero = 0.25881940379280679841; // -Ai'(0)

// Coefficients of the large-|z| expansions, c_k = Gamma(3k+1/2)/(54^k k! Gamma(k+1/2)).
constexpr int kMaxAsym = 40;
const std::array<double, kMaxAsym>& asym_coeffs() {
    static const std::array<double, kMaxAsym> table = [] {
        std::array<double, kMaxAsym> c{};
        c[0] = 1.0;
        for (int k = 1; k < kMaxAsym; ++k) {
            const double kk = static_cast<double>(k);
            c[k] = c[k - 1] * (3.0 * kk - 0.5) * (3.0 * kk - 1.5) * (3.0 * kk - 2.5) /
                   (54.0 * kk * (kk - 0.5));
        }
        return c;
    }();
    return table;
}

Cd maclaurin(Cd z) {
    const Cd z3 = z * z * z;
    Cd f_term(1.0, 0.0), g_term = z;
    Cd f = f_term, g = g_term;
    for (int k = 0; k < 200; ++k) {
        const double kk = static_cast<double>(k);
        f_term *= z3 / ((3.0 * kk + 2.0) * (3.0 * kk + 3.0));
        g_term *= z3 / ((3.0 * kk + 3.0) * (3.0 * kk + 4.0));
        f += f_term;
        g += g_term;
        if (std::abs(f_term) + std::abs(g_term) < 1e-18 * (std::abs(f) + std::abs(g) + 1.0)) break;
    }
    return kAiZero * f - kAiPrimeZero * g;
}

// Alternating sum of c_k zeta^{-k} over k = k0, k0+step, ... with the first
// emitted term positive, truncated at the smallest term.
Cd asym_sum(Cd inv_zeta, int k0, int step) {
    const auto& c = asym_coeffs();
    Cd power = std::pow(inv_zeta, k0);
    Cd sum(0.0, 0.0);
    double prev_mag = std::numeric_limits<double>::infinity();
    int sign = 1;
    const Cd stride = (step == 1) ? inv_zeta : inv_zeta * inv_zeta;
    for (int k = k0; k < kMaxAsym; k += step) {
        const Cd term = c[k] * power;
        const double mag = std::abs(term);
        if (mag > prev_mag) break; // divergent tail reached
        sum += static_cast<double>(sign) * term;
        prev_mag = mag;
        power *= stride;
        sign = -sign;
    }
    return sum;
}

Cd asymptotic_direct(Cd z) {
    const Cd zeta = (2.0 / 3.0) * std::pow(z, 1.5);
    const Cd s = asym_sum(1.0 / zeta, 0, 1);
    return std::exp(-zeta) * s / (2.0 * std::sqrt(std::numbers::pi) * std::pow(z, 0.25));
}

Cd asymptotic_oscillatory(Cd z) {
    const Cd w = -z;
    const Cd zeta = (2.0 / 3.0) * std::pow(w, 1.5);
    const Cd inv = 1.0 / zeta;
    const Cd p = asym_sum(inv, 0, 2);
    const Cd q = asym_sum(inv, 1, 2);
    const Cd phase = zeta - std::numbers::pi / 4.0;
    return (std::cos(phase) * p + std::sin(phase) * q) /
           (std::sqrt(std::numbers::pi) * std::pow(w, 0.25));
}

} // namespace

Cd airy_ai(Cd z) {
    const double r = std::abs(z);
    if (!(r <= kEvaluationRadius))
        throw DomainError("airy_ai: |z| exceeds the evaluation domain (40)");
    if (r <= kSeriesRadius) {
        Cd v = maclaurin(z);
        // The series of a real argument is real term by term; scrub the
        // rounding dust so downstream real-axis checks see exact zeros.
        if (z.imag() == 0.0) v = Cd(v.real(), 0.0);
        return v;
    }
    if (std::abs(std::arg(z)) <= 2.0 * std::numbers::pi / 3.0) return asymptotic_direct(z);
    Cd v = asymptotic_oscillatory(z);
    if (z.imag() == 0.0) v = Cd(v.real(), 0.0);
    return v;
}

std::array<double, 3> airy_ai_abs_peak_constants() {
    return {-1.0188, -3.248, -4.820};
}

double airy_ai_peak_value() {
    static const double v = std::abs(airy_ai(Cd(airy_ai_abs_peak_constants()[0], 0.0)));
    return v;
}

} // namespace airybeam
