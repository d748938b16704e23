#pragma once

#include <span>
#include <vector>

#include "airybeam/grid.hpp"
#include "airybeam/scenario.hpp"

namespace airybeam {

enum class EvanescentPolicy { zero, decay };

struct PropagationSettings {
    double step = 5e-3;
    int padding = 2;
    EvanescentPolicy evanescent = EvanescentPolicy::zero;
    /// Zero spectral components whose rays would leave the padded window
    /// over the hop (the sampled-chirp wrap condition). Off by default: it
    /// trades exact power bookkeeping for long-hop accuracy, which is the
    /// right trade only for channel synthesis.
    bool band_limit = false;

    static PropagationSettings from(const Scenario& s) {
        PropagationSettings p;
        p.step = s.step;
        p.padding = s.grid.padding;
        return p;
    }
};

struct PropagationReport {
    bool aliasing_warning = false;
    double outer_band_power_fraction = 0.0;
};

/// Free-space angular-spectrum transfer factor over axial distance dz.
/// Propagating components have unit modulus; evanescent ones are dropped or
/// decayed per policy. 1D usage passes fy = 0.
Complex transfer_function(double fx, double fy, double dz, double lambda,
                          EvanescentPolicy policy = EvanescentPolicy::zero);

/// One free-space hop of length dz. The field is zero-embedded by the
/// padding factor during the spectral product to keep the circular
/// convolution from wrapping, then cropped back to its grid.
Field1D propagate_free(const Field1D& field, double dz, double lambda,
                       const PropagationSettings& settings = {}, PropagationReport* report = nullptr);
Field2D propagate_free(const Field2D& field, double dz, double lambda,
                       const PropagationSettings& settings = {}, PropagationReport* report = nullptr);

enum class StepOutput {
    final_only, ///< collapse free-space runs into single hops, return {final}
    all_steps   ///< march in steps <= settings.step, return one field per step
};

/// March a field from its own z to z_end through the scenario's obstacle
/// screens; each screen is applied exactly once, on the step that crosses
/// its plane. Settings default to the scenario's (step, padding).
std::vector<Field1D> propagate_blocked(const Field1D& field, double z_end, const Scenario& s,
                                       StepOutput output = StepOutput::final_only,
                                       const PropagationSettings* settings = nullptr);
std::vector<Field2D> propagate_blocked(const Field2D& field, double z_end, const Scenario& s,
                                       StepOutput output = StepOutput::final_only,
                                       const PropagationSettings* settings = nullptr);

/// Linear / bilinear interpolation of complex samples. Points must lie
/// inside the grid span.
Complex field_at_point(const Field1D& field, double x);
Complex field_at_point(const Field2D& field, double x, double y);
std::vector<Complex> field_at_points(const Field1D& field, std::span<const double> xs);
std::vector<Complex> field_at_points(const Field2D& field,
                                     std::span<const std::array<double, 2>> pts);

/// Nearest-cell deposition of element weights onto a grid (weights follow
/// element_positions order; co-located elements accumulate).
Field1D inject_weights(const ArraySpec& array, std::span<const Complex> weights, const Grid1D& grid);
Field2D inject_weights(const ArraySpec& array, std::span<const Complex> weights, const Grid2D& grid);

/// Spectral power carried by propagating components only (the quantity the
/// zero-policy transfer conserves).
double band_limited_power(const Field1D& field, double lambda);
double band_limited_power(const Field2D& field, double lambda);

} // namespace airybeam
