#include "airybeam/phase.hpp"

#include <cmath>
#include <numbers>

namespace airybeam {

double airy_phase_1d(double x0, const AiryParams& p, double lambda) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double cubic = std::pow(two_pi * p.B, 3) / 3.0 * x0 * x0 * x0;
    const double quad = std::isinf(p.F) ? 0.0 : -std::numbers::pi / (lambda * p.F) * x0 * x0;
    const double lin = -two_pi / lambda * std::sin(p.theta) * x0;
    return cubic + quad + lin;
}

double focusing_phase(double x0, double F, double theta, double lambda) {
    return airy_phase_1d(x0, AiryParams{0.0, F, theta}, lambda);
}

double steering_phase(double x0, double theta, double lambda) {
    return airy_phase_1d(x0, AiryParams{0.0, std::numeric_limits<double>::infinity(), theta}, lambda);
}

double upa_phase(double x0, double y0, const AiryParams& px, const AiryParams& py, double lambda) {
    return airy_phase_1d(x0, px, lambda) + airy_phase_1d(y0, py, lambda);
}

ApertureWindow ApertureWindow::gaussian(double waist_x, double waist_y) {
    if (!(waist_x > 0.0)) throw ConfigError("ApertureWindow: waist must be positive");
    ApertureWindow w;
    w.kind = Kind::gaussian;
    w.waist_x = waist_x;
    w.waist_y = waist_y > 0.0 ? waist_y : waist_x;
    return w;
}

double ApertureWindow::amplitude(double x, double y) const {
    if (kind == Kind::rect) return 1.0;
    return std::exp(-x * x / (waist_x * waist_x) - y * y / (waist_y * waist_y));
}

std::vector<Complex> element_weights(const ArraySpec& array,
                                     const std::function<double(double, double)>& phase,
                                     const ApertureWindow& window) {
    const auto pos = element_positions(array);
    std::vector<Complex> w;
    w.reserve(pos.size());
    for (const auto& p : pos)
        w.push_back(std::polar(window.amplitude(p[0], p[1]), phase(p[0], p[1])));
    return w;
}

std::vector<Complex> element_weights(const ArraySpec& array, const AiryParams& px,
                                     const AiryParams& py, double lambda,
                                     const ApertureWindow& window) {
    return element_weights(
        array, [&](double x, double y) { return upa_phase(x, y, px, py, lambda); }, window);
}

} // namespace airybeam
