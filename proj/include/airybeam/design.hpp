#pragma once

#include <optional>

#include "airybeam/analytic.hpp"
#include "airybeam/scenario.hpp"

namespace airybeam {

/// The two spatial constraints a designed trajectory must satisfy: clear the
/// obstacle at the waypoint, land on the target at the receiver plane.
struct Anchors {
    double z_b = 0.0, z_r = 0.0;
    double x_s = 0.0, x_c = 0.0; ///< waypoint / target, bending (x) dimension
    double x_los = 0.0;          ///< LoS line coordinate at z_b; fixes the bending sign
    std::optional<double> y_s, y_c;
    double margin = 0.0; ///< safety margin that produced the waypoint
};

/// Waypoint/target construction for a single-obstacle ULA scenario. The
/// waypoint clears the obstacle edge by `margin` (pass 0 for the default of
/// five wavelengths); the target follows the aperture boundary line to the
/// receiver plane.
Anchors anchors_ula(const Scenario& s, double margin = 0.0);

struct SolvedAiry {
    AiryParams params;
    int sigma = 0; ///< sign branch taken by the curvature root
};

/// Closed-form (B, F, theta) passing through both anchors; the returned
/// parameters satisfy the two boundary conditions to rounding.
SolvedAiry solve_airy_ula(const Anchors& a, const AnalyticContext& ctx);

struct BendingChoice {
    enum class Dim { x, y, none };
    Dim dim = Dim::none;
    double d_px = 0.0, d_py = 0.0; ///< escape distances from the LoS axis point
    double p_x = 0.0, p_y = 0.0;   ///< LoS axis intersection with the obstacle plane
    double waypoint_x = 0.0, waypoint_y = 0.0;
};

/// Pick the transverse dimension needing the smaller deviation to escape the
/// obstacle (ties go to x). Dim::none when the obstacle misses the LoS axis.
BendingChoice select_bending_dimension(const Scenario& s, double margin_x = 0.0,
                                       double margin_y = 0.0);

struct DesignSolution {
    enum class Mode { ula, upa_mode1, upa_mode2 };
    Mode mode = Mode::ula;
    bool no_bend = false; ///< focusing fallback, no Airy dimension
    AiryParams x;
    AiryParams y;
    Anchors anchors;
    int sigma_x = 0, sigma_y = 0;
    ValidityInterval validity;
};

/// Plain focusing solution aimed at the receiver center; what the designers
/// fall back to when nothing blocks the LoS axis.
DesignSolution design_focusing_fallback(const Scenario& s);

DesignSolution design_ula(const Scenario& s, double margin = 0.0);

/// Hybrid mode: Airy along the selected bending dimension, focusing phase
/// aimed at the receiver projection on the other.
DesignSolution design_upa_mode1(const Scenario& s, double margin_x = 0.0, double margin_y = 0.0);

/// Dual mode: independent Airy solutions along both dimensions.
DesignSolution design_upa_mode2(const Scenario& s, double margin_x = 0.0, double margin_y = 0.0);

} // namespace airybeam
