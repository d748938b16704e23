#include "airybeam/eval.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "airybeam/field_io.hpp"
#include "airybeam/parallel.hpp"
#include "airybeam/phase.hpp"
#include "airybeam/propagation.hpp"

namespace airybeam {

namespace {

using std::numbers::pi;
using EigenMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenMat> as_eigen(const ChannelMatrix& h) {
    return Eigen::Map<const EigenMat>(h.a.data(), static_cast<Eigen::Index>(h.n_r),
                                      static_cast<Eigen::Index>(h.n_t));
}

Scenario without_blockages(const Scenario& s) {
    Scenario clear = s;
    clear.blockages.clear();
    return clear;
}

std::vector<Complex> unit_norm(std::vector<Complex> v) {
    double p = 0.0;
    for (const auto& c : v) p += std::norm(c);
    if (!(p > 0.0)) throw NumericalError("unit_norm: zero vector");
    const double inv = 1.0 / std::sqrt(p);
    for (auto& c : v) c *= inv;
    return v;
}

void fix_phase(std::vector<Complex>& v) {
    for (const auto& c : v) {
        if (std::abs(c) > 1e-14) {
            const Complex rot = std::conj(c) / std::abs(c);
            for (auto& x : v) x *= rot;
            return;
        }
    }
}

} // namespace

ChannelMatrix build_channel(const Scenario& s, bool blocked, unsigned jobs) {
    s.validate();
    const Scenario& sim = s;
    const Scenario cleared = without_blockages(s);
    const Scenario& active = blocked ? sim : cleared;

    ChannelMatrix h;
    h.n_t = s.tx.count();
    h.n_r = s.rx.count();
    h.blocked = blocked;
    h.a.assign(h.n_r * h.n_t, Complex(0.0, 0.0));

    // Column hops span the whole link, so wrap-prone wide-angle components
    // must be dropped rather than folded back into the window.
    PropagationSettings settings = PropagationSettings::from(s);
    settings.band_limit = true;

    const auto rx_pos = element_positions(s.rx);
    if (s.tx.kind == ArraySpec::Kind::ula) {
        const Grid1D grid = s.make_grid_1d();
        std::vector<double> xs(h.n_r);
        for (std::size_t r = 0; r < h.n_r; ++r) xs[r] = rx_pos[r][0];
        parallel_for(h.n_t, jobs, [&](std::size_t t) {
            std::vector<Complex> w(h.n_t, Complex(0.0, 0.0));
            w[t] = Complex(1.0, 0.0);
            Field1D f = inject_weights(s.tx, w, grid);
            f = std::move(
                propagate_blocked(f, s.distance, active, StepOutput::final_only, &settings).back());
            for (std::size_t r = 0; r < h.n_r; ++r) h.at(r, t) = field_at_point(f, xs[r]);
        });
    } else {
        const Grid2D grid = s.make_grid_2d();
        parallel_for(h.n_t, jobs, [&](std::size_t t) {
            std::vector<Complex> w(h.n_t, Complex(0.0, 0.0));
            w[t] = Complex(1.0, 0.0);
            Field2D f = inject_weights(s.tx, w, grid);
            f = std::move(
                propagate_blocked(f, s.distance, active, StepOutput::final_only, &settings).back());
            for (std::size_t r = 0; r < h.n_r; ++r)
                h.at(r, t) = field_at_point(f, rx_pos[r][0], rx_pos[r][1]);
        });
    }
    return h;
}

void normalize_channel_pair(ChannelMatrix& h_los, ChannelMatrix& h_quasi) {
    Eigen::JacobiSVD<EigenMat> svd(as_eigen(h_los));
    const double sigma = svd.singularValues()(0);
    if (!(sigma > 0.0)) throw NumericalError("normalize_channel_pair: degenerate channel");
    h_los.sigma_ref = sigma;
    h_quasi.sigma_ref = sigma;
}

std::pair<std::vector<Complex>, std::vector<Complex>> mrt_mrc(const ChannelMatrix& h) {
    if (h.n_r == 0 || h.n_t == 0) throw NumericalError("mrt_mrc: empty channel");
    double total = 0.0;
    for (const auto& c : h.a) total += std::norm(c);
    if (!(total > 0.0)) throw NumericalError("mrt_mrc: degenerate zero channel");

    Eigen::JacobiSVD<EigenMat> svd(as_eigen(h), Eigen::ComputeThinU | Eigen::ComputeThinV);
    std::vector<Complex> w_t(h.n_t), w_r(h.n_r);
    for (std::size_t i = 0; i < h.n_t; ++i) w_t[i] = svd.matrixV()(static_cast<Eigen::Index>(i), 0);
    for (std::size_t i = 0; i < h.n_r; ++i) w_r[i] = svd.matrixU()(static_cast<Eigen::Index>(i), 0);
    fix_phase(w_t);
    fix_phase(w_r);
    return {unit_norm(std::move(w_t)), unit_norm(std::move(w_r))};
}

std::vector<Complex> mrc_receive(const ChannelMatrix& h, const std::vector<Complex>& w_t) {
    if (w_t.size() != h.n_t) throw ConfigError("mrc_receive: weight length mismatch");
    std::vector<Complex> y(h.n_r, Complex(0.0, 0.0));
    for (std::size_t r = 0; r < h.n_r; ++r) {
        Complex acc(0.0, 0.0);
        const Complex* row = h.a.data() + r * h.n_t;
        for (std::size_t t = 0; t < h.n_t; ++t) acc += row[t] * w_t[t];
        y[r] = acc;
    }
    return unit_norm(std::move(y));
}

double spectral_efficiency(const ChannelMatrix& h, const std::vector<Complex>& w_t,
                           const std::vector<Complex>& w_r, const LinkBudget& lb) {
    if (w_t.size() != h.n_t || w_r.size() != h.n_r)
        throw ConfigError("spectral_efficiency: weight length mismatch");
    Complex gain(0.0, 0.0);
    for (std::size_t r = 0; r < h.n_r; ++r) {
        Complex acc(0.0, 0.0);
        const Complex* row = h.a.data() + r * h.n_t;
        for (std::size_t t = 0; t < h.n_t; ++t) acc += row[t] * w_t[t];
        gain += std::conj(w_r[r]) * acc;
    }
    const double snr = lb.rho * std::norm(gain) / (h.sigma_ref * h.sigma_ref);
    return std::log2(1.0 + snr);
}

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::los_digital: return "los-digital";
        case Scheme::quasilos_digital: return "quasilos-digital";
        case Scheme::steering: return "steering";
        case Scheme::focusing: return "focusing";
        case Scheme::airy_closed_form: return "airy-closed-form";
        case Scheme::airy_exhaustive: return "airy-exhaustive";
        case Scheme::upa_mode1: return "upa-mode1";
        case Scheme::upa_mode2: return "upa-mode2";
    }
    return "unknown";
}

std::optional<Scheme> scheme_from_name(const std::string& name) {
    for (Scheme s : {Scheme::los_digital, Scheme::quasilos_digital, Scheme::steering,
                     Scheme::focusing, Scheme::airy_closed_form, Scheme::airy_exhaustive,
                     Scheme::upa_mode1, Scheme::upa_mode2})
        if (scheme_name(s) == name) return s;
    return std::nullopt;
}

SearchGrids SearchGrids::defaults() {
    SearchGrids g;
    for (int i = -30; i <= 30; ++i) {
        const double b = 0.5 * static_cast<double>(i);
        if (std::abs(b) < 0.5) continue;
        g.B.push_back(b);
    }
    for (int i = 3; i <= 30; ++i) g.F.push_back(0.1 * static_cast<double>(i));
    for (int i = -20; i <= 20; ++i) g.theta.push_back(0.005 * static_cast<double>(i));
    return g;
}

namespace {

// Transmit weights of a (possibly planar) Airy configuration, rect window,
// unit total power.
std::vector<Complex> airy_tx_weights(const Scenario& s, const AiryParams& px,
                                     const AiryParams& py) {
    auto w = element_weights(s.tx, px, py, s.lambda, ApertureWindow::rect());
    return unit_norm(std::move(w));
}

AiryParams orthogonal_profile_for_search(const Scenario& s) {
    if (s.tx.kind == ArraySpec::Kind::ula) return AiryParams{}; // unused, phase 0
    if (!s.blockages.empty()) {
        try {
            const DesignSolution m1 = design_upa_mode1(s);
            return m1.y;
        } catch (const std::exception&) {
            // fall through to plain focusing
        }
    }
    AiryParams p;
    p.B = 0.0;
    p.F = s.distance;
    p.theta = std::atan2(s.rx.center_y, s.distance);
    return p;
}

} // namespace

SearchResult exhaustive_airy_search(const Scenario& s, const SearchGrids& grids,
                                    const LinkBudget& lb, const ChannelMatrix& h_quasi,
                                    unsigned jobs) {
    if (grids.B.empty() || grids.F.empty() || grids.theta.empty())
        throw ConfigError("exhaustive_airy_search: empty grid");
    const AiryParams ortho = orthogonal_profile_for_search(s);
    const bool planar = s.tx.kind == ArraySpec::Kind::upa;

    std::vector<SearchResult> best_per_b(grids.B.size());
    parallel_for(grids.B.size(), jobs, [&](std::size_t bi) {
        SearchResult best;
        best.se = -1.0;
        for (double f : grids.F) {
            for (double th : grids.theta) {
                AiryParams p{grids.B[bi], f, th};
                const auto w_t = airy_tx_weights(s, p, planar ? ortho : AiryParams{});
                const auto w_r = mrc_receive(h_quasi, w_t);
                const double se = spectral_efficiency(h_quasi, w_t, w_r, lb);
                if (se > best.se) {
                    best.se = se;
                    best.params = p;
                }
            }
        }
        best_per_b[bi] = best;
    });

    SearchResult winner;
    winner.se = -1.0;
    for (const auto& cand : best_per_b)
        if (cand.se > winner.se) winner = cand;
    return winner;
}

std::pair<std::vector<Complex>, std::vector<Complex>> scheme_weights(const Scenario& s,
                                                                     Scheme scheme,
                                                                     const SchemeContext& ctx) {
    const bool planar = s.tx.kind == ArraySpec::Kind::upa;
    auto need = [](const void* p, const char* what) {
        if (!p) throw ConfigError(std::string("scheme_weights: missing ") + what);
    };

    std::vector<Complex> w_t;
    switch (scheme) {
        case Scheme::los_digital: {
            need(ctx.h_los, "unblocked channel");
            w_t = mrt_mrc(*ctx.h_los).first;
            break;
        }
        case Scheme::quasilos_digital: {
            need(ctx.h_quasi, "quasi-LoS channel");
            w_t = mrt_mrc(*ctx.h_quasi).first;
            break;
        }
        case Scheme::steering: {
            // -k x sin(theta) drifts the beam toward -sin(theta) z, so the
            // aim at the receiver direction carries a minus sign.
            const double theta_x = -std::atan2(s.rx.center_x - s.tx.center_x, s.distance);
            const double theta_y = -std::atan2(s.rx.center_y - s.tx.center_y, s.distance);
            auto w = element_weights(
                s.tx,
                [&](double x, double y) {
                    double phi = steering_phase(x - s.tx.center_x, theta_x, s.lambda);
                    if (planar) phi += steering_phase(y - s.tx.center_y, theta_y, s.lambda);
                    return phi;
                },
                ApertureWindow::rect());
            w_t = unit_norm(std::move(w));
            break;
        }
        case Scheme::focusing: {
            const double k = 2.0 * pi / s.lambda;
            auto w = element_weights(
                s.tx,
                [&](double x, double y) {
                    const double dx = x - s.rx.center_x;
                    const double dy = planar ? y - s.rx.center_y : 0.0;
                    const double r = std::sqrt(dx * dx + dy * dy + s.distance * s.distance);
                    return -k * r;
                },
                ApertureWindow::rect());
            w_t = unit_norm(std::move(w));
            break;
        }
        case Scheme::airy_closed_form:
        case Scheme::upa_mode1: {
            need(ctx.design, "design solution");
            w_t = airy_tx_weights(s, ctx.design->x, ctx.design->y);
            break;
        }
        case Scheme::upa_mode2: {
            need(ctx.design_mode2, "dual-Airy design solution");
            w_t = airy_tx_weights(s, ctx.design_mode2->x, ctx.design_mode2->y);
            break;
        }
        case Scheme::airy_exhaustive: {
            need(ctx.search, "search result");
            const AiryParams ortho = orthogonal_profile_for_search(s);
            w_t = airy_tx_weights(s, ctx.search->params, planar ? ortho : AiryParams{});
            break;
        }
    }
    need(ctx.h_quasi, "quasi-LoS channel");
    return {w_t, mrc_receive(*ctx.h_quasi, w_t)};
}

std::string scenario_digest(const Scenario& s) {
    char buf[256];
    std::string repr;
    auto add = [&](const char* fmt, auto... v) {
        std::snprintf(buf, sizeof(buf), fmt, v...);
        repr += buf;
    };
    add("tx:%d,%zu,%zu,%.17g,%.17g,%.17g;", static_cast<int>(s.tx.kind), s.tx.nx, s.tx.ny,
        s.tx.pitch, s.tx.center_x, s.tx.center_y);
    add("rx:%d,%zu,%zu,%.17g,%.17g,%.17g;", static_cast<int>(s.rx.kind), s.rx.nx, s.rx.ny,
        s.rx.pitch, s.rx.center_x, s.rx.center_y);
    add("link:%.17g,%.17g,%.17g;", s.distance, s.lambda, s.step);
    add("grid:%.17g,%.17g,%d;", s.grid.span, s.grid.pitch, s.grid.padding);
    for (const auto& b : s.blockages) {
        add("b:%.17g,%.17g", b.z, b.attenuation);
        for (const auto& bound : {b.x_min, b.x_max, b.y_min, b.y_max})
            add(",%s", bound ? std::to_string(*bound).c_str() : "-");
        repr += ";";
    }

    // FNV-1a, stable across runs and platforms.
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : repr) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

ChannelCache::ChannelCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

ChannelMatrix ChannelCache::get(const Scenario& s, bool blocked, unsigned jobs) {
    const std::string name = "chan_" + scenario_digest(s) + (blocked ? "_qlos" : "_los") + ".bin";
    const std::filesystem::path path = dir_ / name;
    if (std::filesystem::exists(path)) {
        const FieldDump dump = read_field_dump(path);
        ChannelMatrix h;
        h.n_t = dump.nx;
        h.n_r = dump.ny;
        h.a = dump.values;
        h.blocked = blocked;
        return h;
    }
    ChannelMatrix h = build_channel(s, blocked, jobs);
    // Stored in the field-dump container: nx = transmit count, ny = receive
    // count, unit pitches.
    Field2D as_field(Grid2D(h.n_t, h.n_r, 1.0, 1.0, 0.0, 0.0), s.distance, h.a);
    write_field_dump(path, as_field, s.lambda);
    return h;
}

Scenario scenario_at_point(const Scenario& base, const SweepPoint& pt) {
    if (base.blockages.size() != 1)
        throw ConfigError("scenario_at_point: base scenario needs exactly one obstacle");
    Scenario s = base;
    auto& b = s.blockages.front();
    b.z = pt.z_b;
    if (b.x_max)
        b.x_max = pt.edge;
    else if (b.x_min)
        b.x_min = pt.edge;
    else
        b.x_max = pt.edge;
    return s;
}

std::vector<SweepRow> sweep(const Scenario& base, const std::vector<SweepPoint>& family,
                            const std::vector<Scheme>& schemes, const LinkBudget& lb,
                            ChannelCache* cache, unsigned jobs, const SearchGrids* grids) {
    std::vector<SweepRow> rows;
    const bool planar = base.tx.kind == ArraySpec::Kind::upa;
    const SearchGrids default_grids = SearchGrids::defaults();
    const SearchGrids& search_grids = grids ? *grids : default_grids;

    for (const auto& pt : family) {
        const Scenario s = scenario_at_point(base, pt);

        ChannelMatrix h_los, h_quasi;
        double ratio = 0.0;
        std::string point_error;
        try {
            ratio = planar ? blockage_ratio_upa(s) : blockage_ratio_ula(s);
            h_los = cache ? cache->get(s, false, jobs) : build_channel(s, false, jobs);
            h_quasi = cache ? cache->get(s, true, jobs) : build_channel(s, true, jobs);
            normalize_channel_pair(h_los, h_quasi);
        } catch (const std::exception& e) {
            point_error = e.what();
        }

        // Designs and the search are shared across this point's schemes.
        DesignSolution design, design2;
        SearchResult search;
        bool have_design = false, have_design2 = false, have_search = false;
        std::string design_error, search_error;
        if (point_error.empty()) {
            try {
                design = planar ? design_upa_mode1(s) : design_ula(s);
                have_design = true;
                if (planar) {
                    design2 = design_upa_mode2(s);
                    have_design2 = true;
                }
            } catch (const std::exception& e) {
                design_error = e.what();
            }
            for (Scheme sch : schemes) {
                if (sch != Scheme::airy_exhaustive) continue;
                try {
                    search = exhaustive_airy_search(s, search_grids, lb, h_quasi, jobs);
                    have_search = true;
                } catch (const std::exception& e) {
                    search_error = e.what();
                }
            }
        }

        for (Scheme sch : schemes) {
            SweepRow row;
            row.z_b = pt.z_b;
            row.edge = pt.edge;
            row.ratio = ratio;
            row.scheme = scheme_name(sch);
            if (!point_error.empty()) {
                row.status = "error: " + point_error;
                rows.push_back(std::move(row));
                continue;
            }
            SchemeContext ctx;
            ctx.h_los = &h_los;
            ctx.h_quasi = &h_quasi;
            ctx.design = have_design ? &design : nullptr;
            ctx.design_mode2 = have_design2 ? &design2 : nullptr;
            ctx.search = have_search ? &search : nullptr;
            try {
                const auto [w_t, w_r] = scheme_weights(s, sch, ctx);
                row.se = spectral_efficiency(h_quasi, w_t, w_r, lb);
                if (sch == Scheme::airy_closed_form || sch == Scheme::upa_mode1) {
                    row.x = design.x;
                    row.y = design.y;
                } else if (sch == Scheme::upa_mode2) {
                    row.x = design2.x;
                    row.y = design2.y;
                } else if (sch == Scheme::airy_exhaustive) {
                    row.x = search.params;
                }
            } catch (const std::exception& e) {
                row.status = "error: ";
                row.status += (sch == Scheme::airy_exhaustive && !search_error.empty())
                                  ? search_error
                                  : (!design_error.empty() &&
                                     (sch == Scheme::airy_closed_form || sch == Scheme::upa_mode1 ||
                                      sch == Scheme::upa_mode2))
                                      ? design_error
                                      : e.what();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string csv = "z_b,edge,R_bl,scheme,SE_bits,Bx,Fx,thetax,By,Fy,thetay,status\n";
    char buf[512];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%.17g,%.17g,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n", r.z_b,
                      r.edge, r.ratio, r.scheme.c_str(), r.se, r.x.B, r.x.F, r.x.theta, r.y.B,
                      r.y.F, r.y.theta, r.status.c_str());
        csv += buf;
    }
    return csv;
}

} // namespace airybeam
