#pragma once

#include <filesystem>

#include "airybeam/grid.hpp"

namespace airybeam {

/// Field dump: one UTF-8 JSON header line terminated by '\n', then the
/// samples as little-endian IEEE doubles interleaved (re, im), row-major.
/// The byte layout is stable; golden files depend on it.
void write_field_dump(const std::filesystem::path& path, const Field1D& field, double lambda);
void write_field_dump(const std::filesystem::path& path, const Field2D& field, double lambda);

struct FieldDump {
    std::size_t nx = 0, ny = 0;
    double dx = 0.0, dy = 0.0;
    double origin_x = 0.0, origin_y = 0.0;
    double z = 0.0;
    double lambda = 0.0;
    std::vector<Complex> values;

    bool is_1d() const { return ny == 1; }
    Field1D to_field_1d() const;
    Field2D to_field_2d() const;
};

FieldDump read_field_dump(const std::filesystem::path& path);

} // namespace airybeam
