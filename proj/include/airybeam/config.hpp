#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "airybeam/eval.hpp"
#include "airybeam/propagation.hpp"
#include "airybeam/scenario.hpp"

namespace airybeam {

/// Everything a CLI run needs, loaded from one JSON document. Strictly
/// validated: unknown keys are rejected so a typo cannot silently fall back
/// to a default.
struct Config {
    Scenario scenario;
    EvanescentPolicy evanescent = EvanescentPolicy::zero;

    // design
    double margin_x = 0.0; ///< 0 = default (five wavelengths)
    double margin_y = 0.0;
    std::string design_mode; ///< "ula" | "upa-mode1" | "upa-mode2"; empty = by array kind

    // eval
    LinkBudget budget;
    std::vector<Scheme> schemes;
    SearchGrids grids;
    std::vector<SweepPoint> family;

    // output
    std::filesystem::path out_dir = "out";
    int slices = 24;             ///< field dumps emitted by the propagate command
    std::size_t trajectory_samples = 200;
};

Config load_config(const std::filesystem::path& path);
Config parse_config(const std::string& text);

} // namespace airybeam
