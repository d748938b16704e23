#pragma once

#include <stdexcept>
#include <string>

namespace airybeam {

/// Invalid configuration (grid sizes, settings, config files).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside an operation's documented evaluation domain.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Inconsistent scenario geometry (obstacle placement, tunnel intersection).
struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Point lies outside a sampled field's span.
struct RangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scenario geometry admits no physical beam parameters.
struct InfeasibleDesignError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical procedure failed to converge (quadrature, iteration).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace airybeam
