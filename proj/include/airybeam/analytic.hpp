#pragma once

#include <array>
#include <functional>
#include <vector>

#include "airybeam/grid.hpp"
#include "airybeam/phase.hpp"

namespace airybeam {

/// Parameters of the Gaussian-window analytic layer for one transverse
/// dimension. The finite aperture enters as a waist (half the physical
/// aperture), folded into a complex focal distance.
struct AnalyticContext {
    double lambda = 0.0;
    double waist = 0.0;

    AnalyticContext(double lambda_, double waist_);

    /// Imaginary focal component lambda / (pi waist^2).
    double s_i() const;
    /// 1/F_tilde = 1/F - j s_i; F may be infinite.
    Complex inv_f_tilde(double F) const;
};

/// The cubic/quadratic/linear coefficients of the propagated aperture
/// integral at observation point (x, z).
struct FieldCoefficients {
    double A = 0.0;  ///< (2 pi B)^3
    double C1 = 0.0; ///< -(2 pi / lambda)(sin theta + x/z)
    Complex C2;      ///< (pi / lambda)(1/z - 1/F_tilde)
};

FieldCoefficients field_coefficients(double x, double z, const AiryParams& p,
                                     const AnalyticContext& ctx);

/// Closed-form complex field of the Gaussian-windowed cubic-phase aperture.
/// Requires z > 0 and B != 0.
Complex closed_form_field_ula(double x, double z, const AiryParams& p, const AnalyticContext& ctx);

/// Direct quadrature of the paraxial diffraction integral with a caller
/// supplied initial field. Slow by design; the reference the closed form is
/// validated against. Truncates where the Gaussian window is below e^-16.
Complex fresnel_oracle_ula(double x, double z, const std::function<Complex(double)>& initial_field,
                           const AnalyticContext& ctx);
/// Same, with the initial field exp(j phi(x0)) exp(-x0^2 / waist^2).
Complex fresnel_oracle_ula(double x, double z, const AiryParams& p, const AnalyticContext& ctx);

/// Main-lobe (lobe 0) or side-lobe (1, 2) transverse position at axial z.
/// Pure evaluation; callers enforce a validity interval.
double trajectory_ula(double z, const AiryParams& p, const AnalyticContext& ctx, int lobe = 0);

struct ValidityInterval {
    double z_min = 0.0;
    double z_max = 0.0;

    /// Convention used by the designer: [0.05 z_r, z_r + 0.5 (z_r - z_b)].
    static ValidityInterval from_anchors(double z_b, double z_r);
    bool contains(double z) const { return z >= z_min && z <= z_max; }
};

struct Trajectory {
    int lobe = 0;
    std::vector<std::array<double, 2>> points; ///< (z, x), z strictly increasing
};

Trajectory sample_trajectory_ula(const AiryParams& p, const AnalyticContext& ctx,
                                 const ValidityInterval& interval, int lobe, std::size_t count);

/// Peak field magnitude along the main-lobe trajectory at z, up to the
/// shared Airy peak constant. Requires B != 0.
double magnitude_on_trajectory(const AiryParams& p, const AnalyticContext& ctx, double z);

/// One-dimensional kernel of the separable planar field (the bracketed
/// factor; the shared e^{jkz}/(j lambda z) prefactor is applied by the
/// planar assembly). Handles B = 0 as the pure Gaussian/focusing kernel.
Complex psi_kernel(double u, double z, const AiryParams& p, const AnalyticContext& ctx);

Complex closed_form_field_upa(double x, double y, double z, const AiryParams& px,
                              const AiryParams& py, const AnalyticContext& cx,
                              const AnalyticContext& cy);

/// Per-dimension trajectory; a focusing dimension (B = 0) follows the
/// straight aim line z * tan(theta).
std::array<double, 2> trajectory_upa(double z, const AiryParams& px, const AiryParams& py,
                                     const AnalyticContext& cx, const AnalyticContext& cy,
                                     int lobe = 0);

double magnitude_upa(const AiryParams& px, const AiryParams& py, const AnalyticContext& cx,
                     const AnalyticContext& cy, double z);

} // namespace airybeam
