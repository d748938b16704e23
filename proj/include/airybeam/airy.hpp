#pragma once

#include <array>
#include <complex>

namespace airybeam {

/// Airy function of the first kind for complex argument.
///
/// Evaluation domain is |z| <= 40. Accuracy: <= 1e-9 absolute on the real
/// interval [-15, 5], <= 1e-6 relative off the axis for |Im z| <= 2 over the
/// same real range. Maclaurin series inside |z| <= 6, asymptotic expansions
/// beyond (direct sector |arg z| <= 2pi/3, connection formula elsewhere).
std::complex<double> airy_ai(std::complex<double> z);

/// Arguments of the first three local maxima of |Ai| on the real axis,
/// frozen at the working precision used throughout the trajectory math:
/// (-1.0188, -3.248, -4.820), strictly decreasing.
std::array<double, 3> airy_ai_abs_peak_constants();

/// |Ai| evaluated at the first peak constant; the on-trajectory magnitude
/// model treats this value as a constant.
double airy_ai_peak_value();

} // namespace airybeam
