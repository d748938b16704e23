#include "airybeam/field_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

namespace airybeam {

static_assert(std::endian::native == std::endian::little,
              "field dumps assume a little-endian host");

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string header_line(std::size_t nx, std::size_t ny, double dx, double dy, double ox, double oy,
                        double z, double lambda) {
    std::string h = "{\"nx\":" + std::to_string(nx) + ",\"ny\":" + std::to_string(ny) +
                    ",\"dx\":" + num(dx) + ",\"dy\":" + num(dy) + ",\"ox\":" + num(ox) +
                    ",\"oy\":" + num(oy) + ",\"z\":" + num(z) + ",\"lambda\":" + num(lambda) + "}\n";
    return h;
}

void write_payload(std::ofstream& out, const std::vector<Complex>& values) {
    static_assert(sizeof(Complex) == 2 * sizeof(double));
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(Complex)));
}

void write_dump(const std::filesystem::path& path, std::size_t nx, std::size_t ny, double dx,
                double dy, double ox, double oy, double z, double lambda,
                const std::vector<Complex>& values) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("write_field_dump: cannot open " + path.string());
    const std::string h = header_line(nx, ny, dx, dy, ox, oy, z, lambda);
    out.write(h.data(), static_cast<std::streamsize>(h.size()));
    write_payload(out, values);
    if (!out) throw ConfigError("write_field_dump: write failed for " + path.string());
}

} // namespace

void write_field_dump(const std::filesystem::path& path, const Field1D& field, double lambda) {
    write_dump(path, field.grid.n, 1, field.grid.dx, 0.0, field.grid.origin, 0.0, field.z, lambda,
               field.values);
}

void write_field_dump(const std::filesystem::path& path, const Field2D& field, double lambda) {
    write_dump(path, field.grid.nx, field.grid.ny, field.grid.dx, field.grid.dy,
               field.grid.origin_x, field.grid.origin_y, field.z, lambda, field.values);
}

Field1D FieldDump::to_field_1d() const {
    if (!is_1d()) throw ConfigError("FieldDump: not a 1D dump");
    return Field1D(Grid1D(nx, dx, origin_x), z, values);
}

Field2D FieldDump::to_field_2d() const {
    if (is_1d()) throw ConfigError("FieldDump: not a 2D dump");
    return Field2D(Grid2D(nx, ny, dx, dy, origin_x, origin_y), z, values);
}

FieldDump read_field_dump(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("read_field_dump: cannot open " + path.string());
    std::string header;
    if (!std::getline(in, header)) throw ConfigError("read_field_dump: missing header line");

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(header);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("read_field_dump: bad header: ") + e.what());
    }

    FieldDump d;
    d.nx = j.at("nx").get<std::size_t>();
    d.ny = j.at("ny").get<std::size_t>();
    d.dx = j.at("dx").get<double>();
    d.dy = j.at("dy").get<double>();
    d.origin_x = j.at("ox").get<double>();
    d.origin_y = j.at("oy").get<double>();
    d.z = j.at("z").get<double>();
    d.lambda = j.at("lambda").get<double>();

    d.values.resize(d.nx * d.ny);
    in.read(reinterpret_cast<char*>(d.values.data()),
            static_cast<std::streamsize>(d.values.size() * sizeof(Complex)));
    if (in.gcount() != static_cast<std::streamsize>(d.values.size() * sizeof(Complex)))
        throw ConfigError("read_field_dump: truncated payload in " + path.string());
    return d;
}

} // namespace airybeam
