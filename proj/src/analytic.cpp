#include "airybeam/analytic.hpp"

#include <cmath>
#include <numbers>

#include "airybeam/airy.hpp"
#include "airybeam/quadrature.hpp"

namespace airybeam {

namespace {
constexpr Complex kJ(0.0, 1.0);
using std::numbers::pi;
} // namespace

AnalyticContext::AnalyticContext(double lambda_, double waist_) : lambda(lambda_), waist(waist_) {
    if (!(lambda > 0.0)) throw ConfigError("AnalyticContext: wavelength must be positive");
    if (!(waist > 0.0)) throw ConfigError("AnalyticContext: waist must be positive");
}

double AnalyticContext::s_i() const { return lambda / (pi * waist * waist); }

Complex AnalyticContext::inv_f_tilde(double F) const {
    const double re = std::isinf(F) ? 0.0 : 1.0 / F;
    return Complex(re, -s_i());
}

FieldCoefficients field_coefficients(double x, double z, const AiryParams& p,
                                     const AnalyticContext& ctx) {
    FieldCoefficients c;
    c.A = std::pow(2.0 * pi * p.B, 3);
    c.C1 = -(2.0 * pi / ctx.lambda) * (std::sin(p.theta) + x / z);
    c.C2 = pi / ctx.lambda * (1.0 / z - ctx.inv_f_tilde(p.F));
    return c;
}

Complex closed_form_field_ula(double x, double z, const AiryParams& p, const AnalyticContext& ctx) {
    if (!(z > 0.0)) throw DomainError("closed_form_field_ula: z must be positive");
    if (p.B == 0.0)
        throw DomainError("closed_form_field_ula: B = 0 is degenerate; use the Gaussian kernel");
    const double k = 2.0 * pi / ctx.lambda;
    const Complex pref = std::exp(kJ * (k * z)) / (kJ * ctx.lambda * z);
    return pref * psi_kernel(x, z, p, ctx);
}

Complex psi_kernel(double u, double z, const AiryParams& p, const AnalyticContext& ctx) {
    if (!(z > 0.0)) throw DomainError("psi_kernel: z must be positive");
    const FieldCoefficients c = field_coefficients(u, z, p, ctx);
    const Complex curvature = std::exp(kJ * (pi / (ctx.lambda * z) * u * u));
    if (p.B == 0.0) {
        // Pure Gaussian/focusing dimension: the aperture integral is a
        // complex Gaussian, convergent because Im C2 = 1/waist^2 > 0.
        const Complex a = -kJ * c.C2;
        return curvature * std::sqrt(pi / a) * std::exp(-kJ * c.C1 * c.C1 / (4.0 * c.C2));
    }
    // Real cube root; gamma and the bending direction carry B's sign.
    const double gamma = 1.0 / (2.0 * pi * p.B);
    const Complex xi = gamma * (c.C1 - c.C2 * c.C2 / c.A);
    const Complex phi_c = 2.0 * c.C2 * c.C2 * c.C2 / (3.0 * c.A * c.A) - c.C1 * c.C2 / c.A;
    return (1.0 / std::abs(p.B)) * curvature * std::exp(kJ * phi_c) * airy_ai(xi);
}

Complex fresnel_oracle_ula(double x, double z, const std::function<Complex(double)>& initial_field,
                           const AnalyticContext& ctx) {
    if (!(z > 0.0)) throw DomainError("fresnel_oracle_ula: z must be positive");
    const double k = 2.0 * pi / ctx.lambda;
    const double half = 4.0 * ctx.waist;
    auto integrand = [&](double x0) {
        return initial_field(x0) * std::exp(kJ * (k / (2.0 * z) * (x - x0) * (x - x0)));
    };
    const Complex integral = integrate_gk<double>(integrand, -half, half, 1e-8);
    return std::exp(kJ * (k * z)) / (kJ * ctx.lambda * z) * integral;
}

Complex fresnel_oracle_ula(double x, double z, const AiryParams& p, const AnalyticContext& ctx) {
    auto initial = [&](double x0) {
        const double w = std::exp(-x0 * x0 / (ctx.waist * ctx.waist));
        return std::polar(w, airy_phase_1d(x0, p, ctx.lambda));
    };
    return fresnel_oracle_ula(x, z, initial, ctx);
}

double trajectory_ula(double z, const AiryParams& p, const AnalyticContext& ctx, int lobe) {
    if (!(z > 0.0)) throw DomainError("trajectory_ula: z must be positive");
    if (p.B == 0.0) throw DomainError("trajectory_ula: B = 0 has no Airy trajectory");
    if (lobe < 0 || lobe > 2) throw DomainError("trajectory_ula: lobe must be 0, 1 or 2");
    const double xi = airy_ai_abs_peak_constants()[static_cast<std::size_t>(lobe)];
    const double s_r = 1.0 / z - (std::isinf(p.F) ? 0.0 : 1.0 / p.F);
    const double s_i = ctx.s_i();
    return -xi * ctx.lambda * z * p.B - std::sin(p.theta) * z -
           (s_r * s_r - s_i * s_i) / (16.0 * ctx.lambda * pi * pi * p.B * p.B * p.B) * z;
}

ValidityInterval ValidityInterval::from_anchors(double z_b, double z_r) {
    if (!(0.0 < z_b) || !(z_b < z_r))
        throw DomainError("ValidityInterval: need 0 < z_b < z_r");
    return {0.05 * z_r, z_r + 0.5 * (z_r - z_b)};
}

Trajectory sample_trajectory_ula(const AiryParams& p, const AnalyticContext& ctx,
                                 const ValidityInterval& interval, int lobe, std::size_t count) {
    if (!(interval.z_min > 0.0) || !(interval.z_max > interval.z_min))
        throw DomainError("sample_trajectory_ula: bad validity interval");
    if (count < 2) throw DomainError("sample_trajectory_ula: need at least two samples");
    Trajectory t;
    t.lobe = lobe;
    t.points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double z = interval.z_min + (interval.z_max - interval.z_min) *
                                              static_cast<double>(i) / static_cast<double>(count - 1);
        t.points.push_back({z, trajectory_ula(z, p, ctx, lobe)});
    }
    return t;
}

double magnitude_on_trajectory(const AiryParams& p, const AnalyticContext& ctx, double z) {
    if (!(z > 0.0)) throw DomainError("magnitude_on_trajectory: z must be positive");
    if (p.B == 0.0) throw DomainError("magnitude_on_trajectory: B = 0 is degenerate");
    const double xi_peak = airy_ai_abs_peak_constants()[0];
    const double i_c2 = 1.0 / (ctx.waist * ctx.waist); // Im C2 = (pi/lambda) s_i
    const double r_c2 = pi / ctx.lambda * (1.0 / z - (std::isinf(p.F) ? 0.0 : 1.0 / p.F));
    const double four_pi2 = std::pow(2.0 * pi, 2);
    const double k2 = -xi_peak * i_c2 / four_pi2;
    const double k6 = (r_c2 * r_c2 * i_c2 + i_c2 * i_c2 * i_c2 / 3.0) / std::pow(2.0 * pi, 6);
    const double b2 = p.B * p.B;
    const double b6 = b2 * b2 * b2;
    return std::abs(airy_ai_peak_value() / (ctx.lambda * z * p.B)) *
           std::exp(-(k2 / b2 + k6 / b6));
}

Complex closed_form_field_upa(double x, double y, double z, const AiryParams& px,
                              const AiryParams& py, const AnalyticContext& cx,
                              const AnalyticContext& cy) {
    if (!(z > 0.0)) throw DomainError("closed_form_field_upa: z must be positive");
    const double k = 2.0 * pi / cx.lambda;
    return 1.0 / (kJ * cx.lambda * z) * psi_kernel(x, z, px, cx) * psi_kernel(y, z, py, cy) *
           std::exp(kJ * (k * z));
}

std::array<double, 2> trajectory_upa(double z, const AiryParams& px, const AiryParams& py,
                                     const AnalyticContext& cx, const AnalyticContext& cy,
                                     int lobe) {
    auto one = [&](const AiryParams& p, const AnalyticContext& ctx) {
        // A focusing dimension rides the paraxial chief ray through the
        // recentered lens: u(z) = -z sin(theta).
        if (p.B == 0.0) return -z * std::sin(p.theta);
        return trajectory_ula(z, p, ctx, lobe);
    };
    return {one(px, cx), one(py, cy)};
}

double magnitude_upa(const AiryParams& px, const AiryParams& py, const AnalyticContext& cx,
                     const AnalyticContext& cy, double z) {
    // Product of the per-dimension magnitudes with the 1/(lambda z) factor
    // shared once.
    return magnitude_on_trajectory(px, cx, z) * magnitude_on_trajectory(py, cy, z) *
           (cx.lambda * z);
}

} // namespace airybeam
