#include "airybeam/design.hpp"

#include <cmath>
#include <numbers>

#include "airybeam/airy.hpp"

namespace airybeam {

namespace {

using std::numbers::pi;

double default_margin(const Scenario& s, double margin) {
    return margin > 0.0 ? margin : 5.0 * s.lambda;
}

double los_x(const Scenario& s, double z) {
    return s.tx.center_x + (s.rx.center_x - s.tx.center_x) * z / s.distance;
}

double los_y(const Scenario& s, double z) {
    return s.tx.center_y + (s.rx.center_y - s.tx.center_y) * z / s.distance;
}

} // namespace

Anchors anchors_ula(const Scenario& s, double margin) {
    s.validate();
    if (s.blockages.size() != 1) throw GeometryError("anchors_ula: need exactly one obstacle");
    const auto& b = s.blockages.front();
    const double d_s = default_margin(s, margin);

    Anchors a;
    a.z_b = b.z;
    a.z_r = s.distance;
    a.margin = d_s;

    const double d_t = s.tx.aperture_x();
    const double d_r = s.rx.aperture_x();
    const double x_r = s.rx.center_x;

    // Obstacle below its edge: bend over the top, follow the upper aperture
    // boundary line. Obstacle above: mirrored.
    if (b.x_max && !b.x_min) {
        a.x_s = *b.x_max + d_s;
        a.x_c = a.x_s + (x_r + 0.5 * (d_r - d_t)) / a.z_r * (a.z_r - a.z_b);
    } else if (b.x_min && !b.x_max) {
        a.x_s = *b.x_min - d_s;
        a.x_c = a.x_s + (x_r - 0.5 * (d_r - d_t)) / a.z_r * (a.z_r - a.z_b);
    } else {
        throw GeometryError("anchors_ula: obstacle must be a half-plane edge");
    }
    a.x_los = los_x(s, a.z_b);

    const Grid1D grid = s.make_grid_1d();
    const double limit = 0.5 * grid.span() - 4.0 * s.lambda;
    if (std::abs(a.x_s) > limit || std::abs(a.x_c) > limit)
        throw InfeasibleDesignError("anchors_ula: waypoint escapes the simulation span");
    return a;
}

SolvedAiry solve_airy_ula(const Anchors& a, const AnalyticContext& ctx) {
    if (!(a.z_b > 0.0) || !(a.z_b < a.z_r)) throw DomainError("solve_airy_ula: need 0 < z_b < z_r");
    const double lambda = ctx.lambda;
    const double w0 = ctx.waist;
    const double xi_peak = airy_ai_abs_peak_constants()[0];

    const double dev_slope = a.x_c / a.z_r - a.x_s / a.z_b;
    const double inv_diff = 1.0 / a.z_r - 1.0 / a.z_b;

    // Quadratic in T = B^3: the linear coefficient halved, then the
    // discriminant with the waist terms.
    const double half_p1 = 3.0 * dev_slope / (16.0 * lambda * pi * pi * w0 * w0);
    const double disc = half_p1 * half_p1 + 2.0 / (std::pow(2.0 * pi, 6) * std::pow(w0, 6)) +
                        3.0 * inv_diff * inv_diff /
                            (128.0 * lambda * lambda * std::pow(pi, 4) * w0 * w0);
    const double root = std::sqrt(disc);

    // One root per sign (the constant term is strictly negative). Keep the
    // branch whose bending direction matches the deviation the waypoint
    // demands; with zero deviation the branches tie in predicted magnitude
    // and + is the declared tie-break.
    const double required = a.x_s - a.x_los;
    const int sigma = required < 0.0 ? -1 : +1;
    const double t = -half_p1 + static_cast<double>(sigma) * root;

    AiryParams p;
    p.B = std::cbrt(t);

    const double q1 = 0.5 * (1.0 / a.z_r + 1.0 / a.z_b);
    const double q2 = 8.0 * lambda * pi * pi * dev_slope / inv_diff;
    const double inv_f = q1 + q2 * t;
    p.F = inv_f == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / inv_f;

    const double s_i = ctx.s_i();
    const double s_rb = 1.0 / a.z_b - inv_f;
    const double sin_theta = -xi_peak * lambda * p.B - a.x_s / a.z_b -
                             (s_rb * s_rb - s_i * s_i) /
                                 (16.0 * lambda * pi * pi * p.B * p.B * p.B);
    if (!(std::abs(sin_theta) <= 1.0))
        throw InfeasibleDesignError("solve_airy_ula: geometry demands an unphysical steering angle");
    p.theta = std::asin(sin_theta);
    return {p, sigma};
}

BendingChoice select_bending_dimension(const Scenario& s, double margin_x, double margin_y) {
    s.validate();
    if (s.blockages.size() != 1)
        throw GeometryError("select_bending_dimension: need exactly one obstacle");
    const auto& b = s.blockages.front();
    const double d_sx = default_margin(s, margin_x);
    const double d_sy = default_margin(s, margin_y);

    BendingChoice c;
    c.p_x = los_x(s, b.z);
    c.p_y = los_y(s, b.z);
    if (!b.contains(c.p_x, c.p_y)) return c; // LoS axis clear, no bend needed

    const double inf = std::numeric_limits<double>::infinity();
    const double up_x = b.x_max ? *b.x_max - c.p_x : inf;
    const double down_x = b.x_min ? c.p_x - *b.x_min : inf;
    const double up_y = b.y_max ? *b.y_max - c.p_y : inf;
    const double down_y = b.y_min ? c.p_y - *b.y_min : inf;
    c.d_px = std::min(up_x, down_x);
    c.d_py = std::min(up_y, down_y);
    if (std::isinf(c.d_px) && std::isinf(c.d_py))
        throw GeometryError("select_bending_dimension: obstacle admits no transverse escape");

    c.waypoint_x = c.p_x;
    c.waypoint_y = c.p_y;
    if (c.d_px <= c.d_py) {
        c.dim = BendingChoice::Dim::x;
        c.waypoint_x = (up_x <= down_x) ? *b.x_max + d_sx : *b.x_min - d_sx;
    } else {
        c.dim = BendingChoice::Dim::y;
        c.waypoint_y = (up_y <= down_y) ? *b.y_max + d_sy : *b.y_min - d_sy;
    }
    return c;
}

namespace {

// Target anchor on the receiver plane: continue from the waypoint along the
// aperture boundary line of the bending side.
double target_from_waypoint(double waypoint, bool upper_side, double z_b, double z_r,
                            double rx_center, double aperture_t, double aperture_r) {
    const double slope = upper_side ? (rx_center + 0.5 * (aperture_r - aperture_t)) / z_r
                                    : (rx_center - 0.5 * (aperture_r - aperture_t)) / z_r;
    return waypoint + slope * (z_r - z_b);
}

// Focusing profile whose recentered lens lands on (z_r, target): the linear
// term -k u sin(theta) recenters the quadratic by -F sin(theta), so the aim
// angle carries a minus sign.
AiryParams focusing_at(double z_r, double target) {
    AiryParams p;
    p.B = 0.0;
    p.F = z_r;
    p.theta = -std::asin(target / z_r);
    return p;
}

} // namespace

DesignSolution design_focusing_fallback(const Scenario& s) {
    s.validate();
    DesignSolution d;
    d.no_bend = true;
    d.x = focusing_at(s.distance, s.rx.center_x);
    d.y = focusing_at(s.distance, s.rx.center_y);
    d.anchors.z_b = s.blockages.empty() ? s.distance / 2.0 : s.blockages.front().z;
    d.anchors.z_r = s.distance;
    d.anchors.x_s = los_x(s, d.anchors.z_b);
    d.anchors.x_c = s.rx.center_x;
    d.validity = ValidityInterval::from_anchors(d.anchors.z_b, d.anchors.z_r);
    d.mode = s.tx.kind == ArraySpec::Kind::ula ? DesignSolution::Mode::ula
                                               : DesignSolution::Mode::upa_mode1;
    return d;
}

DesignSolution design_ula(const Scenario& s, double margin) {
    if (s.blockages.empty()) return design_focusing_fallback(s);
    const Anchors a = anchors_ula(s, margin);
    const AnalyticContext ctx(s.lambda, s.tx.aperture_x() / 2.0);
    const SolvedAiry solved = solve_airy_ula(a, ctx);
    DesignSolution d;
    d.mode = DesignSolution::Mode::ula;
    d.x = solved.params;
    d.anchors = a;
    d.sigma_x = solved.sigma;
    d.validity = ValidityInterval::from_anchors(a.z_b, a.z_r);
    return d;
}

DesignSolution design_upa_mode1(const Scenario& s, double margin_x, double margin_y) {
    if (s.blockages.empty()) {
        DesignSolution d = design_focusing_fallback(s);
        d.mode = DesignSolution::Mode::upa_mode1;
        return d;
    }
    const BendingChoice bend = select_bending_dimension(s, margin_x, margin_y);
    DesignSolution d;
    d.mode = DesignSolution::Mode::upa_mode1;
    if (bend.dim == BendingChoice::Dim::none) {
        d = design_focusing_fallback(s);
        d.mode = DesignSolution::Mode::upa_mode1;
        return d;
    }

    const auto& b = s.blockages.front();
    if (bend.dim == BendingChoice::Dim::x) {
        const bool upper = bend.waypoint_x > bend.p_x;
        Anchors ax;
        ax.z_b = b.z;
        ax.z_r = s.distance;
        ax.margin = default_margin(s, margin_x);
        ax.x_s = bend.waypoint_x;
        ax.x_los = bend.p_x;
        ax.x_c = target_from_waypoint(ax.x_s, upper, ax.z_b, ax.z_r, s.rx.center_x,
                                      s.tx.aperture_x(), s.rx.aperture_x());
        const AnalyticContext cx(s.lambda, s.tx.aperture_x() / 2.0);
        const SolvedAiry solved = solve_airy_ula(ax, cx);
        d.x = solved.params;
        d.sigma_x = solved.sigma;
        d.y = focusing_at(s.distance, s.rx.center_y);
        d.anchors = ax;
        d.anchors.y_s = bend.p_y;
        d.anchors.y_c = s.rx.center_y;
    } else {
        const bool upper = bend.waypoint_y > bend.p_y;
        Anchors ay; // solved in the bending (y) coordinate
        ay.z_b = b.z;
        ay.z_r = s.distance;
        ay.margin = default_margin(s, margin_y);
        ay.x_s = bend.waypoint_y;
        ay.x_los = bend.p_y;
        ay.x_c = target_from_waypoint(ay.x_s, upper, ay.z_b, ay.z_r, s.rx.center_y,
                                      s.tx.aperture_y(), s.rx.aperture_y());
        const AnalyticContext cy(s.lambda, s.tx.aperture_y() / 2.0);
        const SolvedAiry solved = solve_airy_ula(ay, cy);
        d.y = solved.params;
        d.sigma_y = solved.sigma;
        d.x = focusing_at(s.distance, s.rx.center_x);
        d.anchors.z_b = b.z;
        d.anchors.z_r = s.distance;
        d.anchors.x_s = bend.p_x;
        d.anchors.x_c = s.rx.center_x;
        d.anchors.x_los = bend.p_x;
        d.anchors.y_s = ay.x_s;
        d.anchors.y_c = ay.x_c;
        d.anchors.margin = ay.margin;
    }
    d.validity = ValidityInterval::from_anchors(d.anchors.z_b, d.anchors.z_r);
    return d;
}

DesignSolution design_upa_mode2(const Scenario& s, double margin_x, double margin_y) {
    if (s.blockages.empty()) {
        DesignSolution d = design_focusing_fallback(s);
        d.mode = DesignSolution::Mode::upa_mode2;
        return d;
    }
    const BendingChoice bend = select_bending_dimension(s, margin_x, margin_y);
    DesignSolution d = design_upa_mode1(s, margin_x, margin_y);
    d.mode = DesignSolution::Mode::upa_mode2;
    if (d.no_bend) return d;

    const auto& b = s.blockages.front();
    const double inf = std::numeric_limits<double>::infinity();

    // Independent per-dimension anchors: escape through the nearest boundary
    // where the obstacle bounds the axis, stay on the LoS line otherwise.
    auto dim_anchors = [&](double p, double margin, std::optional<double> lo,
                           std::optional<double> hi, double rx_center, double ap_t,
                           double ap_r) -> Anchors {
        Anchors a;
        a.z_b = b.z;
        a.z_r = s.distance;
        a.margin = margin;
        a.x_los = p;
        const double up = hi ? *hi - p : inf;
        const double down = lo ? p - *lo : inf;
        if (std::isinf(up) && std::isinf(down)) {
            a.x_s = p;
            a.x_c = rx_center;
            return a;
        }
        const bool upper = up <= down;
        a.x_s = upper ? *hi + margin : *lo - margin;
        a.x_c = target_from_waypoint(a.x_s, upper, a.z_b, a.z_r, rx_center, ap_t, ap_r);
        return a;
    };

    const Anchors ax = dim_anchors(bend.p_x, default_margin(s, margin_x), b.x_min, b.x_max,
                                   s.rx.center_x, s.tx.aperture_x(), s.rx.aperture_x());
    const Anchors ay = dim_anchors(bend.p_y, default_margin(s, margin_y), b.y_min, b.y_max,
                                   s.rx.center_y, s.tx.aperture_y(), s.rx.aperture_y());

    const AnalyticContext cx(s.lambda, s.tx.aperture_x() / 2.0);
    const AnalyticContext cy(s.lambda, s.tx.aperture_y() / 2.0);
    const SolvedAiry sx = solve_airy_ula(ax, cx);
    const SolvedAiry sy = solve_airy_ula(ay, cy);
    d.x = sx.params;
    d.y = sy.params;
    d.sigma_x = sx.sigma;
    d.sigma_y = sy.sigma;
    d.anchors = ax;
    d.anchors.y_s = ay.x_s;
    d.anchors.y_c = ay.x_c;
    d.validity = ValidityInterval::from_anchors(ax.z_b, ax.z_r);
    return d;
}

} // namespace airybeam
