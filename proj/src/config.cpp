#include "airybeam/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace airybeam {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("config: unknown key \"" + it.key() + "\" in " + where);
}

double require_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError("config: missing \"" + key + "\" in " + where);
    if (!j.at(key).is_number()) throw ConfigError("config: \"" + key + "\" in " + where + " must be a number");
    return j.at(key).get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

ArraySpec parse_array(const json& j, ArraySpec::Kind kind, double lambda, const std::string& where) {
    check_keys(j, {"count", "nx", "ny", "pitch_m", "pitch_wavelengths", "center_x_m", "center_y_m"},
               where);
    double pitch = 0.0;
    if (j.contains("pitch_m") && j.contains("pitch_wavelengths"))
        throw ConfigError("config: give either pitch_m or pitch_wavelengths in " + where);
    if (j.contains("pitch_m"))
        pitch = j.at("pitch_m").get<double>();
    else if (j.contains("pitch_wavelengths"))
        pitch = j.at("pitch_wavelengths").get<double>() * lambda;
    else
        throw ConfigError("config: missing pitch in " + where);

    const double cx = number_or(j, "center_x_m", 0.0);
    const double cy = number_or(j, "center_y_m", 0.0);
    if (kind == ArraySpec::Kind::ula) {
        const auto n = static_cast<std::size_t>(require_number(j, "count", where));
        return ArraySpec::ula(n, pitch, cx);
    }
    const auto nx = static_cast<std::size_t>(require_number(j, "nx", where));
    const auto ny = static_cast<std::size_t>(require_number(j, "ny", where));
    return ArraySpec::upa(nx, ny, pitch, cx, cy);
}

std::vector<double> parse_grid_axis(const json& j, const std::string& where) {
    check_keys(j, {"min", "max", "step", "exclude_abs_below"}, where);
    const double lo = require_number(j, "min", where);
    const double hi = require_number(j, "max", where);
    const double step = require_number(j, "step", where);
    const double excl = number_or(j, "exclude_abs_below", 0.0);
    if (!(step > 0.0) || hi < lo) throw ConfigError("config: bad grid axis in " + where);
    std::vector<double> v;
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
        const double x = lo + static_cast<double>(i) * step;
        if (std::abs(x) < excl) continue;
        v.push_back(x);
    }
    if (v.empty()) throw ConfigError("config: grid axis empty in " + where);
    return v;
}

} // namespace

Config parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
    check_keys(j, {"scenario", "propagation", "design", "eval", "output"}, "top level");
    if (!j.contains("scenario")) throw ConfigError("config: missing \"scenario\" section");

    Config cfg;
    Scenario& s = cfg.scenario;

    const json& sc = j.at("scenario");
    check_keys(sc,
               {"kind", "frequency_hz", "wavelength_m", "tx", "rx", "distance_m", "blockages",
                "grid"},
               "scenario");
    const std::string kind_str = sc.contains("kind") ? sc.at("kind").get<std::string>() : "ula";
    ArraySpec::Kind kind;
    if (kind_str == "ula")
        kind = ArraySpec::Kind::ula;
    else if (kind_str == "upa")
        kind = ArraySpec::Kind::upa;
    else
        throw ConfigError("config: scenario.kind must be \"ula\" or \"upa\"");

    if (sc.contains("frequency_hz") == sc.contains("wavelength_m"))
        throw ConfigError("config: give exactly one of frequency_hz / wavelength_m");
    s.lambda = sc.contains("wavelength_m")
                   ? sc.at("wavelength_m").get<double>()
                   : wavelength_from_frequency(sc.at("frequency_hz").get<double>());
    s.distance = require_number(sc, "distance_m", "scenario");
    if (!sc.contains("tx") || !sc.contains("rx"))
        throw ConfigError("config: scenario needs tx and rx arrays");
    s.tx = parse_array(sc.at("tx"), kind, s.lambda, "scenario.tx");
    s.rx = parse_array(sc.at("rx"), kind, s.lambda, "scenario.rx");

    if (sc.contains("blockages")) {
        for (const auto& bj : sc.at("blockages")) {
            check_keys(bj, {"z_m", "attenuation", "x_min_m", "x_max_m", "y_min_m", "y_max_m"},
                       "scenario.blockages[]");
            BlockageSpec b;
            b.z = require_number(bj, "z_m", "blockage");
            b.attenuation = number_or(bj, "attenuation", 0.0);
            if (bj.contains("x_min_m")) b.x_min = bj.at("x_min_m").get<double>();
            if (bj.contains("x_max_m")) b.x_max = bj.at("x_max_m").get<double>();
            if (bj.contains("y_min_m")) b.y_min = bj.at("y_min_m").get<double>();
            if (bj.contains("y_max_m")) b.y_max = bj.at("y_max_m").get<double>();
            s.blockages.push_back(b);
        }
    }
    if (sc.contains("grid")) {
        const json& g = sc.at("grid");
        check_keys(g, {"span_m", "pitch_m"}, "scenario.grid");
        s.grid.span = number_or(g, "span_m", 0.0);
        s.grid.pitch = number_or(g, "pitch_m", 0.0);
    }

    if (j.contains("propagation")) {
        const json& p = j.at("propagation");
        check_keys(p, {"step_m", "padding", "evanescent"}, "propagation");
        s.step = number_or(p, "step_m", s.step);
        s.grid.padding = static_cast<int>(number_or(p, "padding", s.grid.padding));
        if (p.contains("evanescent")) {
            const std::string e = p.at("evanescent").get<std::string>();
            if (e == "zero")
                cfg.evanescent = EvanescentPolicy::zero;
            else if (e == "decay")
                cfg.evanescent = EvanescentPolicy::decay;
            else
                throw ConfigError("config: propagation.evanescent must be \"zero\" or \"decay\"");
        }
    }

    if (j.contains("design")) {
        const json& d = j.at("design");
        check_keys(d, {"margin_wavelengths", "margin_x_wavelengths", "margin_y_wavelengths", "mode"},
                   "design");
        const double m = number_or(d, "margin_wavelengths", 0.0);
        cfg.margin_x = number_or(d, "margin_x_wavelengths", m) * s.lambda;
        cfg.margin_y = number_or(d, "margin_y_wavelengths", m) * s.lambda;
        if (d.contains("mode")) {
            cfg.design_mode = d.at("mode").get<std::string>();
            if (cfg.design_mode != "ula" && cfg.design_mode != "upa-mode1" &&
                cfg.design_mode != "upa-mode2")
                throw ConfigError("config: design.mode must be ula | upa-mode1 | upa-mode2");
        }
    }

    cfg.grids = SearchGrids::defaults();
    if (j.contains("eval")) {
        const json& e = j.at("eval");
        check_keys(e, {"rho", "schemes", "search", "sweep"}, "eval");
        cfg.budget.rho = number_or(e, "rho", cfg.budget.rho);
        if (!(cfg.budget.rho > 0.0)) throw ConfigError("config: eval.rho must be positive");
        if (e.contains("schemes")) {
            for (const auto& name : e.at("schemes")) {
                const auto sch = scheme_from_name(name.get<std::string>());
                if (!sch) throw ConfigError("config: unknown scheme \"" + name.get<std::string>() + "\"");
                cfg.schemes.push_back(*sch);
            }
        }
        if (e.contains("search")) {
            const json& g = e.at("search");
            check_keys(g, {"B", "F", "theta"}, "eval.search");
            if (g.contains("B")) cfg.grids.B = parse_grid_axis(g.at("B"), "eval.search.B");
            if (g.contains("F")) cfg.grids.F = parse_grid_axis(g.at("F"), "eval.search.F");
            if (g.contains("theta"))
                cfg.grids.theta = parse_grid_axis(g.at("theta"), "eval.search.theta");
        }
        if (e.contains("sweep")) {
            const json& sw = e.at("sweep");
            check_keys(sw, {"z_b", "edges"}, "eval.sweep");
            std::vector<double> zs, edges;
            if (sw.contains("z_b")) {
                if (sw.at("z_b").is_array())
                    zs = sw.at("z_b").get<std::vector<double>>();
                else
                    zs.push_back(sw.at("z_b").get<double>());
            } else if (!s.blockages.empty()) {
                zs.push_back(s.blockages.front().z);
            }
            if (sw.contains("edges")) edges = sw.at("edges").get<std::vector<double>>();
            for (double z : zs)
                for (double e2 : edges) cfg.family.push_back({z, e2});
        }
    }
    if (cfg.schemes.empty()) {
        cfg.schemes = {Scheme::quasilos_digital, Scheme::los_digital, Scheme::steering,
                       Scheme::focusing};
        if (kind == ArraySpec::Kind::ula) {
            cfg.schemes.push_back(Scheme::airy_closed_form);
            cfg.schemes.push_back(Scheme::airy_exhaustive);
        } else {
            cfg.schemes.push_back(Scheme::upa_mode1);
            cfg.schemes.push_back(Scheme::upa_mode2);
        }
    }

    if (j.contains("output")) {
        const json& o = j.at("output");
        check_keys(o, {"dir", "slices", "trajectory_samples"}, "output");
        if (o.contains("dir")) cfg.out_dir = o.at("dir").get<std::string>();
        cfg.slices = static_cast<int>(number_or(o, "slices", cfg.slices));
        cfg.trajectory_samples =
            static_cast<std::size_t>(number_or(o, "trajectory_samples", 200.0));
    }

    s.validate();
    return cfg;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

} // namespace airybeam
