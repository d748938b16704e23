#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "airybeam/analytic.hpp"
#include "airybeam/config.hpp"
#include "airybeam/design.hpp"
#include "airybeam/eval.hpp"
#include "airybeam/field_io.hpp"
#include "airybeam/phase.hpp"
#include "airybeam/propagation.hpp"

namespace fs = std::filesystem;
using namespace airybeam;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitNumerical = 3;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json finite_or_string(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : "-inf";
}

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    unsigned jobs = 0;
    bool verbose = false;
};

Config load(const CliOptions& opt) {
    Config cfg = load_config(opt.config_path);
    if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
    fs::create_directories(cfg.out_dir);
    return cfg;
}

DesignSolution run_design(const Config& cfg) {
    const Scenario& s = cfg.scenario;
    std::string mode = cfg.design_mode;
    if (mode.empty()) mode = s.tx.kind == ArraySpec::Kind::ula ? "ula" : "upa-mode1";
    if (mode == "ula") return design_ula(s, cfg.margin_x);
    if (mode == "upa-mode1") return design_upa_mode1(s, cfg.margin_x, cfg.margin_y);
    return design_upa_mode2(s, cfg.margin_x, cfg.margin_y);
}

double boundary_residual(const DesignSolution& d, const Config& cfg) {
    if (d.no_bend) return 0.0;
    double worst = 0.0;
    auto check = [&](const AiryParams& p, double waist, double z, double want) {
        const AnalyticContext ctx(cfg.scenario.lambda, waist);
        const double got = trajectory_ula(z, p, ctx, 0);
        const double scale = std::max(std::abs(want), cfg.scenario.lambda);
        worst = std::max(worst, std::abs(got - want) / scale);
    };
    const auto& a = d.anchors;
    if (d.x.B != 0.0) {
        check(d.x, cfg.scenario.tx.aperture_x() / 2.0, a.z_b, a.x_s);
        check(d.x, cfg.scenario.tx.aperture_x() / 2.0, a.z_r, a.x_c);
    }
    if (d.y.B != 0.0 && a.y_s && a.y_c) {
        check(d.y, cfg.scenario.tx.aperture_y() / 2.0, a.z_b, *a.y_s);
        check(d.y, cfg.scenario.tx.aperture_y() / 2.0, a.z_r, *a.y_c);
    }
    return worst;
}

nlohmann::json design_json(const DesignSolution& d, const Config& cfg) {
    const char* mode = d.mode == DesignSolution::Mode::ula ? "ula"
                       : d.mode == DesignSolution::Mode::upa_mode1 ? "upa-mode1"
                                                                   : "upa-mode2";
    nlohmann::json anchors{{"z_b", d.anchors.z_b}, {"z_r", d.anchors.z_r},
                           {"x_s", d.anchors.x_s}, {"x_c", d.anchors.x_c},
                           {"margin", d.anchors.margin}};
    if (d.anchors.y_s) anchors["y_s"] = *d.anchors.y_s;
    if (d.anchors.y_c) anchors["y_c"] = *d.anchors.y_c;
    nlohmann::json j{{"mode", mode},
                     {"no_bend", d.no_bend},
                     {"Bx", d.x.B},
                     {"Fx", finite_or_string(d.x.F)},
                     {"thetax", d.x.theta},
                     {"By", d.y.B},
                     {"Fy", finite_or_string(d.y.F)},
                     {"thetay", d.y.theta},
                     {"sigma", d.sigma_x != 0 ? d.sigma_x : d.sigma_y},
                     {"anchors", anchors},
                     {"boundary_residual", boundary_residual(d, cfg)},
                     {"validity", {{"z_min", d.validity.z_min}, {"z_max", d.validity.z_max}}}};
    return j;
}

int cmd_design(const CliOptions& opt) {
    const Config cfg = load(opt);
    const DesignSolution d = run_design(cfg);
    const nlohmann::json j = design_json(d, cfg);
    const std::string text = j.dump(2) + "\n";
    std::cout << text;
    std::ofstream out(cfg.out_dir / "design.json");
    out << text;
    return kExitOk;
}

// Sampled trajectory CSV: columns z, x[, y], lobe.
int cmd_trajectory(const CliOptions& opt, const std::optional<AiryParams>& explicit_params,
                   double z_min, double z_max) {
    const Config cfg = load(opt);
    const Scenario& s = cfg.scenario;
    const bool planar = s.tx.kind == ArraySpec::Kind::upa;

    AiryParams px, py;
    ValidityInterval validity;
    if (explicit_params) {
        px = *explicit_params;
        py = AiryParams{};
        if (!(z_min > 0.0) || !(z_max > z_min))
            throw ConfigError("trajectory: explicit parameters need --z-min/--z-max");
        validity = {z_min, z_max};
    } else {
        const DesignSolution d = run_design(cfg);
        px = d.x;
        py = d.y;
        validity = d.validity;
    }

    const AnalyticContext cx(s.lambda, s.tx.aperture_x() / 2.0);
    const AnalyticContext cy(s.lambda, planar ? s.tx.aperture_y() / 2.0 : s.tx.aperture_x() / 2.0);

    std::string csv = planar ? "z,x,y,lobe\n" : "z,x,lobe\n";
    const std::size_t n = cfg.trajectory_samples;
    for (int lobe = 0; lobe < 3; ++lobe) {
        if (px.B == 0.0 && py.B == 0.0 && lobe > 0) break; // focusing has a single ray
        for (std::size_t i = 0; i < n; ++i) {
            const double z = validity.z_min + (validity.z_max - validity.z_min) *
                                                  static_cast<double>(i) / static_cast<double>(n - 1);
            if (planar) {
                const auto [x, y] = trajectory_upa(z, px, py, cx, cy, lobe);
                csv += fmt(z) + "," + fmt(x) + "," + fmt(y) + "," + std::to_string(lobe) + "\n";
            } else {
                const double x = px.B != 0.0 ? trajectory_ula(z, px, cx, lobe) : -z * std::sin(px.theta);
                csv += fmt(z) + "," + fmt(x) + "," + std::to_string(lobe) + "\n";
            }
        }
    }
    std::cout << csv;
    std::ofstream out(cfg.out_dir / "trajectory.csv");
    out << csv;
    return kExitOk;
}

int cmd_propagate(const CliOptions& opt, const std::optional<AiryParams>& explicit_params) {
    const Config cfg = load(opt);
    const Scenario& s = cfg.scenario;
    const bool planar = s.tx.kind == ArraySpec::Kind::upa;

    AiryParams px, py;
    if (explicit_params) {
        px = *explicit_params;
        py = AiryParams{0.0, s.distance, 0.0};
    } else {
        const DesignSolution d = run_design(cfg);
        px = d.x;
        py = d.y;
    }

    const auto weights = element_weights(s.tx, px, py, s.lambda, ApertureWindow::rect());
    const int slices = std::max(cfg.slices, 1);
    std::string csv = planar ? "z,x_peak,y_peak,peak_intensity\n" : "z,x_peak,peak_intensity\n";

    auto slice_path = [&](int k) {
        char name[64];
        std::snprintf(name, sizeof(name), "field_%04d.bin", k);
        return cfg.out_dir / name;
    };

    if (!planar) {
        const Grid1D grid = s.make_grid_1d();
        Field1D f = inject_weights(s.tx, weights, grid);
        for (int k = 1; k <= slices; ++k) {
            const double z = s.distance * static_cast<double>(k) / static_cast<double>(slices);
            f = std::move(propagate_blocked(f, z, s).back());
            write_field_dump(slice_path(k), f, s.lambda);
            std::size_t best = 0;
            for (std::size_t i = 1; i < f.values.size(); ++i)
                if (std::norm(f.values[i]) > std::norm(f.values[best])) best = i;
            csv += fmt(z) + "," + fmt(grid.coord(best)) + "," + fmt(std::norm(f.values[best])) + "\n";
        }
    } else {
        const Grid2D grid = s.make_grid_2d();
        Field2D f = inject_weights(s.tx, weights, grid);
        for (int k = 1; k <= slices; ++k) {
            const double z = s.distance * static_cast<double>(k) / static_cast<double>(slices);
            f = std::move(propagate_blocked(f, z, s).back());
            write_field_dump(slice_path(k), f, s.lambda);
            std::size_t best = 0;
            for (std::size_t i = 1; i < f.values.size(); ++i)
                if (std::norm(f.values[i]) > std::norm(f.values[best])) best = i;
            const std::size_t iy = best / grid.nx, ix = best % grid.nx;
            csv += fmt(z) + "," + fmt(grid.coord_x(ix)) + "," + fmt(grid.coord_y(iy)) + "," +
                   fmt(std::norm(f.values[best])) + "\n";
        }
    }
    std::ofstream out(cfg.out_dir / "intensity.csv");
    out << csv;
    std::cout << csv;
    return kExitOk;
}

int cmd_sweep(const CliOptions& opt) {
    const Config cfg = load(opt);
    if (cfg.family.empty() && !cfg.scenario.blockages.empty())
        throw ConfigError("sweep: config has no eval.sweep family");
    ChannelCache cache(cfg.out_dir / "cache");
    const auto rows =
        sweep(cfg.scenario, cfg.family, cfg.schemes, cfg.budget, &cache, opt.jobs, &cfg.grids);
    const std::string csv = sweep_csv(rows);
    std::ofstream out(cfg.out_dir / "sweep.csv");
    out << csv;
    std::cout << csv;
    return kExitOk;
}

nlohmann::json error_json(const char* kind, const std::exception& e) {
    return nlohmann::json{{"error", kind}, {"message", e.what()}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Airy-beam design, scalar-diffraction simulation and benchmarking"};
    app.require_subcommand(1);

    CliOptions opt;
    app.add_option("--config", opt.config_path, "JSON configuration file")->required();
    app.add_option("--out", opt.out_dir, "output directory (overrides config)");
    app.add_option("--jobs", opt.jobs, "worker thread cap (0 = hardware)");
    app.add_flag("--verbose", opt.verbose, "chatty diagnostics");

    auto* design = app.add_subcommand("design", "solve beam parameters for the scenario");
    auto* trajectory = app.add_subcommand("trajectory", "emit predicted trajectory CSV");
    auto* propagate = app.add_subcommand("propagate", "simulate and dump field slices");
    auto* sweep_cmd = app.add_subcommand("sweep", "run the scheme-comparison sweep");

    double b_opt = 0.0, f_opt = 0.0, theta_opt = 0.0, z_min = 0.0, z_max = 0.0;
    for (auto* sub : {trajectory, propagate}) {
        sub->add_option("--B", b_opt, "explicit curving coefficient");
        sub->add_option("--F", f_opt, "explicit focal distance (m)");
        sub->add_option("--theta", theta_opt, "explicit steering angle (rad)");
    }
    trajectory->add_option("--z-min", z_min, "trajectory start (m), explicit-parameter mode");
    trajectory->add_option("--z-max", z_max, "trajectory end (m), explicit-parameter mode");

    CLI11_PARSE(app, argc, argv);

    auto explicit_params = [&](const CLI::App* sub) -> std::optional<AiryParams> {
        if (!sub->count("--B") && !sub->count("--F") && !sub->count("--theta")) return std::nullopt;
        AiryParams p;
        p.B = b_opt;
        p.F = sub->count("--F") ? f_opt : std::numeric_limits<double>::infinity();
        p.theta = theta_opt;
        return p;
    };

    try {
        if (design->parsed()) return cmd_design(opt);
        if (trajectory->parsed()) return cmd_trajectory(opt, explicit_params(trajectory), z_min, z_max);
        if (propagate->parsed()) return cmd_propagate(opt, explicit_params(propagate));
        if (sweep_cmd->parsed()) return cmd_sweep(opt);
    } catch (const InfeasibleDesignError& e) {
        std::cout << error_json("infeasible-design", e).dump(2) << "\n";
        return kExitInfeasible;
    } catch (const ConfigError& e) {
        std::cerr << error_json("input", e).dump(2) << "\n";
        return kExitInput;
    } catch (const GeometryError& e) {
        std::cerr << error_json("geometry", e).dump(2) << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << error_json("numerical", e).dump(2) << "\n";
        return kExitNumerical;
    }
    return kExitInput;
}
