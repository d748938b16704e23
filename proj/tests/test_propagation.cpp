#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "airybeam/fft.hpp"
#include "airybeam/field_io.hpp"
#include "airybeam/phase.hpp"
#include "airybeam/propagation.hpp"
#include "airybeam/quadrature.hpp"
#include "helpers.hpp"

using namespace airybeam;

namespace {

const double kLambda = wavelength_from_frequency(140e9);

Field1D random_band_limited(const Grid1D& g, double lambda, double band_fill = 0.6) {
    // Build the spectrum directly so the content stays well inside the
    // propagating band.
    Field1D spec(g, 0.0);
    const double f_max = std::min(0.5 / g.dx, 1.0 / lambda);
    for (std::size_t k = 0; k < g.n; ++k) {
        const double f = detail::frequency(k, g.n, g.dx);
        if (std::abs(f) < band_fill * f_max)
            spec.values[k] = Complex(testutil::uniform(-1, 1), testutil::uniform(-1, 1));
    }
    return dft_inverse(spec);
}

} // namespace

TEST_CASE("transfer function basics") {
    const double dz = 0.01;
    const Complex dc = transfer_function(0.0, 0.0, dz, kLambda);
    CHECK(std::abs(dc) == doctest::Approx(1.0));
    CHECK(std::arg(dc) ==
          doctest::Approx(std::remainder(2.0 * std::numbers::pi * dz / kLambda,
                                         2.0 * std::numbers::pi)));

    for (double f : {0.1 / kLambda, 0.5 / kLambda, 0.99 / kLambda})
        CHECK(std::abs(transfer_function(f, 0.0, dz, kLambda)) == doctest::Approx(1.0));

    const double f_ev = 1.01 / kLambda;
    CHECK(transfer_function(f_ev, 0.0, dz, kLambda, EvanescentPolicy::zero) == Complex(0.0, 0.0));
    const Complex decayed = transfer_function(f_ev, 0.0, dz, kLambda, EvanescentPolicy::decay);
    CHECK(decayed.imag() == 0.0);
    CHECK(decayed.real() > 0.0);
    CHECK(decayed.real() < 1.0);
}

TEST_CASE("transfer function reciprocity") {
    for (int i = 0; i < 32; ++i) {
        const double fx = testutil::uniform(-1.2 / kLambda, 1.2 / kLambda);
        const double fy = testutil::uniform(-1.2 / kLambda, 1.2 / kLambda);
        CHECK(transfer_function(fx, fy, 0.02, kLambda) ==
              transfer_function(-fx, -fy, 0.02, kLambda));
    }
}

TEST_CASE("zero field propagates to zero") {
    Field1D f(Grid1D::centered(64, kLambda / 2.0), 0.0);
    const Field1D out = propagate_free(f, 0.1, kLambda);
    for (const auto& v : out.values) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("uniform field picks up only the on-axis phase") {
    Field1D f(Grid1D::centered(128, kLambda / 2.0), 0.0);
    for (auto& v : f.values) v = Complex(0.7, -0.2);
    PropagationSettings set;
    set.padding = 1; // keep the field strictly uniform on the circular domain
    const double dz = 0.0123;
    const Field1D out = propagate_free(f, dz, kLambda, set);
    const Complex expect = Complex(0.7, -0.2) * std::polar(1.0, 2.0 * std::numbers::pi * dz / kLambda);
    for (const auto& v : out.values) CHECK(std::abs(v - expect) < 1e-12);
}

TEST_CASE("gaussian beam widens per the analytic waist law") {
    const double w0 = 5e-3;
    const double zr = std::numbers::pi * w0 * w0 / kLambda; // Rayleigh range
    const Grid1D g = Grid1D::centered(1024, 2.5e-4);
    Field1D f(g, 0.0);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.coord(i);
        f.values[i] = std::exp(-x * x / (w0 * w0));
    }
    for (double z : {0.3 * zr, 0.7 * zr, zr}) {
        const Field1D out = propagate_free(f, z, kLambda);
        double m2 = 0.0, m0 = 0.0;
        for (std::size_t i = 0; i < g.n; ++i) {
            const double x = g.coord(i);
            const double p = std::norm(out.values[i]);
            m0 += p;
            m2 += p * x * x;
        }
        const double w_est = 2.0 * std::sqrt(m2 / m0);
        const double w_want = w0 * std::sqrt(1.0 + (z / zr) * (z / zr));
        CHECK(std::abs(w_est - w_want) / w_want < 0.01);
    }
}

TEST_CASE("2d gaussian beam widens per the analytic waist law") {
    const double w0 = 5e-3;
    const double zr = std::numbers::pi * w0 * w0 / kLambda;
    const Grid2D g = Grid2D::centered(256, 256, 5e-4, 5e-4);
    Field2D f(g, 0.0);
    for (std::size_t jy = 0; jy < g.ny; ++jy)
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            const double r2 = g.coord_x(ix) * g.coord_x(ix) + g.coord_y(jy) * g.coord_y(jy);
            f.at(ix, jy) = std::exp(-r2 / (w0 * w0));
        }
    const double z = 0.8 * zr;
    const Field2D out = propagate_free(f, z, kLambda);
    double m2x = 0.0, m2y = 0.0, m0 = 0.0;
    for (std::size_t jy = 0; jy < g.ny; ++jy)
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            const double p = std::norm(out.at(ix, jy));
            m0 += p;
            m2x += p * g.coord_x(ix) * g.coord_x(ix);
            m2y += p * g.coord_y(jy) * g.coord_y(jy);
        }
    const double w_want = w0 * std::sqrt(1.0 + (z / zr) * (z / zr));
    CHECK(std::abs(2.0 * std::sqrt(m2x / m0) - w_want) / w_want < 0.01);
    CHECK(std::abs(2.0 * std::sqrt(m2y / m0) - w_want) / w_want < 0.01);
}

TEST_CASE("free-space hops compose") {
    const Grid1D g = Grid1D::centered(512, kLambda / 2.0);
    Field1D f = random_band_limited(g, kLambda);
    PropagationSettings set;
    set.padding = 1;
    const Field1D two = propagate_free(propagate_free(f, 0.23, kLambda, set), 0.41, kLambda, set);
    const Field1D one = propagate_free(f, 0.64, kLambda, set);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        num += std::norm(two.values[i] - one.values[i]);
        den += std::norm(one.values[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-10);
}

TEST_CASE("band-limited power is conserved under the zero policy") {
    const Grid1D g = Grid1D::centered(512, kLambda / 2.0);
    Field1D f = random_band_limited(g, kLambda);
    PropagationSettings set;
    set.padding = 1;
    const double before = band_limited_power(f, kLambda);
    const Field1D out = propagate_free(f, 0.77, kLambda, set);
    const double after = band_limited_power(out, kLambda);
    CHECK(std::abs(after - before) / before < 1e-9);
}

TEST_CASE("propagation is linear") {
    const Grid1D g = Grid1D::centered(256, kLambda / 2.0);
    Field1D a = random_band_limited(g, kLambda);
    Field1D b = random_band_limited(g, kLambda);
    Field1D sum(g, 0.0);
    for (std::size_t i = 0; i < g.n; ++i) sum.values[i] = a.values[i] + 2.0 * b.values[i];
    const Field1D pa = propagate_free(a, 0.2, kLambda);
    const Field1D pb = propagate_free(b, 0.2, kLambda);
    const Field1D ps = propagate_free(sum, 0.2, kLambda);
    for (std::size_t i = 0; i < g.n; ++i)
        CHECK(std::abs(ps.values[i] - pa.values[i] - 2.0 * pb.values[i]) < 1e-12);
}

TEST_CASE("blocked march: no obstacles equals one free hop") {
    Scenario s;
    s.tx = ArraySpec::ula(64, kLambda / 2.0);
    s.rx = s.tx;
    s.distance = 1.0;
    s.lambda = kLambda;
    s.grid.padding = 1;
    s.step = 0.05;
    const Grid1D g = s.make_grid_1d();
    Field1D f = random_band_limited(g, kLambda);

    const auto stepped = propagate_blocked(f, 1.0, s, StepOutput::all_steps);
    CHECK(stepped.size() == 20);
    PropagationSettings set = PropagationSettings::from(s);
    const Field1D direct = propagate_free(f, 1.0, kLambda, set);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        num += std::norm(stepped.back().values[i] - direct.values[i]);
        den += std::norm(direct.values[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-10);

    const auto collapsed = propagate_blocked(f, 1.0, s, StepOutput::final_only);
    CHECK(collapsed.size() == 1);
    for (std::size_t i = 0; i < g.n; ++i)
        CHECK(std::abs(collapsed.back().values[i] - direct.values[i]) < 1e-12);
}

TEST_CASE("fully covering absorber zeroes everything downstream") {
    Scenario s;
    s.tx = ArraySpec::ula(64, kLambda / 2.0);
    s.rx = s.tx;
    s.distance = 1.0;
    s.lambda = kLambda;
    s.grid.span = 0.2;
    BlockageSpec b;
    b.z = 0.5;
    b.x_max = 10.0; // covers the whole grid
    s.blockages.push_back(b);
    const Grid1D g = s.make_grid_1d();
    Field1D f = random_band_limited(g, kLambda);
    const auto out = propagate_blocked(f, 1.0, s, StepOutput::final_only);
    for (const auto& v : out.back().values) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("knife edge matches the diffraction-integral oracle") {
    // Lit half-plane x > 0 at z = 0, observed 0.5 m downstream.
    const double L = 0.5;
    const Grid1D g = Grid1D::centered(2048, kLambda / 2.0);
    Scenario s;
    s.tx = ArraySpec::ula(64, kLambda / 2.0);
    s.rx = s.tx;
    s.distance = 1.0;
    s.lambda = kLambda;
    s.blockages.push_back(BlockageSpec::ula_edge(1e-6, 0.0, true));
    s.grid.span = g.span();

    Field1D f(g, 0.0);
    for (std::size_t i = 0; i < g.n; ++i) f.values[i] = Complex(1.0, 0.0);
    auto out = propagate_blocked(f, L, s, StepOutput::final_only).back();

    // Quadrature over the same lit aperture with the paraxial kernel.
    const double x_hi = g.coord(g.n - 1);
    const Complex j(0.0, 1.0);
    const Complex pref = 1.0 / std::sqrt(j * kLambda * L);
    auto oracle = [&](double x) {
        auto integrand = [&](double x0) {
            const double d = x - x0;
            return std::exp(j * (std::numbers::pi / (kLambda * L) * d * d));
        };
        return pref * integrate_gk<double>(integrand, 0.0, x_hi, 1e-8);
    };

    double num = 0.0, den = 0.0, peak_sim = 0.0, peak_orc = 0.0;
    std::vector<double> xs, sim, orc;
    for (double x = -0.05; x <= 0.1; x += 1.6e-3) {
        const double is = std::norm(field_at_point(out, x));
        const double io = std::norm(oracle(x));
        sim.push_back(is);
        orc.push_back(io);
        peak_sim = std::max(peak_sim, is);
        peak_orc = std::max(peak_orc, io);
    }
    for (std::size_t i = 0; i < sim.size(); ++i) {
        const double a = sim[i] / peak_sim;
        const double b = orc[i] / peak_orc;
        num += (a - b) * (a - b);
        den += b * b;
    }
    CHECK(std::sqrt(num / den) < 0.02);
}

TEST_CASE("focusing weights produce a focal spot at the aim point") {
    Scenario s;
    s.tx = ArraySpec::ula(64, kLambda / 2.0);
    s.rx = s.tx;
    s.distance = 0.5;
    s.lambda = kLambda;
    s.grid.span = 0.3;
    const double focus_x = 0.01;
    const double k = 2.0 * std::numbers::pi / kLambda;
    const auto w = element_weights(
        s.tx,
        [&](double x, double) {
            const double dx = x - focus_x;
            return -k * std::sqrt(dx * dx + s.distance * s.distance);
        },
        ApertureWindow::rect());
    const Grid1D g = s.make_grid_1d();
    Field1D f = inject_weights(s.tx, w, g);
    f = std::move(propagate_blocked(f, s.distance, s).back());
    const double peak = testutil::find_peak_1d(f, focus_x, 0.05);
    CHECK(std::abs(peak - focus_x) <= 2.0 * g.dx);
}

TEST_CASE("interpolation rules") {
    const Grid1D g = Grid1D::centered(8, 0.5);
    Field1D f(g, 0.0);
    for (std::size_t i = 0; i < g.n; ++i) f.values[i] = Complex(static_cast<double>(i), 1.0);
    CHECK(field_at_point(f, g.coord(3)) == f.values[3]);
    const Complex mid = field_at_point(f, 0.5 * (g.coord(3) + g.coord(4)));
    CHECK(mid.real() == doctest::Approx(3.5));
    CHECK_THROWS_AS(field_at_point(f, g.coord(7) + 0.1), RangeError);

    Field1D c(g, 0.0);
    for (auto& v : c.values) v = Complex(2.5, -1.0);
    for (double x = g.coord(0); x <= g.coord(7); x += 0.37)
        CHECK(std::abs(field_at_point(c, x) - Complex(2.5, -1.0)) < 1e-14);
}

TEST_CASE("bilinear interpolation on a plane") {
    const Grid2D g = Grid2D::centered(8, 8, 0.25, 0.5);
    Field2D f(g, 0.0);
    for (std::size_t jy = 0; jy < g.ny; ++jy)
        for (std::size_t ix = 0; ix < g.nx; ++ix)
            f.at(ix, jy) = Complex(2.0 * g.coord_x(ix) - g.coord_y(jy), 0.0);
    for (int i = 0; i < 16; ++i) {
        const double x = testutil::uniform(g.coord_x(0), g.coord_x(7));
        const double y = testutil::uniform(g.coord_y(0), g.coord_y(7));
        CHECK(field_at_point(f, x, y).real() == doctest::Approx(2.0 * x - y).epsilon(1e-12));
    }
}

TEST_CASE("weights deposit on the element cells") {
    const ArraySpec a = ArraySpec::ula(64, kLambda / 2.0);
    const Grid1D g = Grid1D::centered(256, kLambda / 2.0);
    std::vector<Complex> w(64, Complex(0.5, 0.5));
    const Field1D f = inject_weights(a, w, g);
    double total = 0.0;
    for (const auto& v : f.values) total += std::abs(v);
    CHECK(total == doctest::Approx(64.0 * std::abs(Complex(0.5, 0.5))).epsilon(1e-12));
    // element 0 sits at -31.5 pitches; the grid puts a cell center there
    CHECK(std::abs(field_at_point(f, -31.5 * a.pitch) - Complex(0.5, 0.5)) < 1e-12);
}

TEST_CASE("aliasing guard flags under-resolved content") {
    const Grid1D g = Grid1D::centered(256, kLambda / 2.0);
    Field1D smooth(g, 0.0);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.coord(i);
        smooth.values[i] = std::exp(-x * x / (25.0 * kLambda * kLambda));
    }
    PropagationReport rep;
    propagate_free(smooth, 0.05, kLambda, {}, &rep);
    CHECK(!rep.aliasing_warning);

    Field1D spiky(g, 0.0);
    const double f_high = 0.48 / g.dx;
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.coord(i);
        spiky.values[i] = std::polar(1.0, 2.0 * std::numbers::pi * f_high * x);
    }
    PropagationReport rep2;
    propagate_free(spiky, 0.05, kLambda, {}, &rep2);
    CHECK(rep2.aliasing_warning);
    CHECK(rep2.outer_band_power_fraction > 0.5);
}

TEST_CASE("field dump byte layout is stable") {
    const std::filesystem::path path = std::filesystem::temp_directory_path() / "airybeam_dump.bin";
    Field1D f(Grid1D(2, 0.25, -0.125), 0.25);
    f.values[0] = Complex(1.5, -2.0);
    f.values[1] = Complex(0.0, 3.25);
    write_field_dump(path, f, 0.5);

    std::ifstream in(path, std::ios::binary);
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "{\"nx\":2,\"ny\":1,\"dx\":0.25,\"dy\":0,\"ox\":-0.125,\"oy\":0,\"z\":0.25,"
          "\"lambda\":0.5}");
    double payload[4] = {};
    in.read(reinterpret_cast<char*>(payload), sizeof(payload));
    CHECK(in.gcount() == sizeof(payload));
    CHECK(payload[0] == 1.5);
    CHECK(payload[1] == -2.0);
    CHECK(payload[2] == 0.0);
    CHECK(payload[3] == 3.25);
    in.get();
    CHECK(in.eof());

    const FieldDump d = read_field_dump(path);
    CHECK(d.is_1d());
    CHECK(d.lambda == 0.5);
    const Field1D back = d.to_field_1d();
    CHECK(back.z == 0.25);
    CHECK(back.values[1] == Complex(0.0, 3.25));
    std::filesystem::remove(path);
}
