#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "airybeam/grid.hpp"
#include "airybeam/scenario.hpp"

namespace airybeam {

/// Beam parameter triple for one transverse dimension: cubic curving
/// coefficient B (1/m), focal distance F (m, may be +inf for a steering
/// profile), steering angle theta (rad). B = 0 degenerates to a focusing
/// profile.
struct AiryParams {
    double B = 0.0;
    double F = std::numeric_limits<double>::infinity();
    double theta = 0.0;
};

/// Aperture phase (1/3)(2 pi B)^3 x^3 - (pi/(lambda F)) x^2 - (2 pi/lambda) sin(theta) x.
/// Not wrapped; wrapping happens at weight exponentiation.
double airy_phase_1d(double x0, const AiryParams& p, double lambda);

double focusing_phase(double x0, double F, double theta, double lambda);
double steering_phase(double x0, double theta, double lambda);

/// Separable planar profile phi_x(x0) + phi_y(y0).
double upa_phase(double x0, double y0, const AiryParams& px, const AiryParams& py, double lambda);

struct ApertureWindow {
    enum class Kind { rect, gaussian };
    Kind kind = Kind::rect;
    double waist_x = 0.0; ///< Gaussian waist per axis (gaussian only)
    double waist_y = 0.0;

    static ApertureWindow rect() { return {}; }
    static ApertureWindow gaussian(double waist_x, double waist_y = 0.0);

    double amplitude(double x, double y = 0.0) const;
};

/// Per-element complex weights w = window(pos) * exp(j phi(pos)), in
/// element_positions order. The caller normalizes when a power budget
/// matters.
std::vector<Complex> element_weights(const ArraySpec& array,
                                     const std::function<double(double, double)>& phase,
                                     const ApertureWindow& window);

/// Convenience: Airy/focusing/steering weights from per-dimension parameters.
std::vector<Complex> element_weights(const ArraySpec& array, const AiryParams& px,
                                     const AiryParams& py, double lambda,
                                     const ApertureWindow& window);

} // namespace airybeam
