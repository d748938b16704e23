#include "airybeam/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace airybeam {
namespace detail {
namespace {

// FFTW plan creation is not thread-safe; executing a cached plan on fresh
// buffers is. Plans are created with FFTW_UNALIGNED so they accept any
// std::vector storage.
std::mutex g_plan_mutex;

fftw_plan plan_1d(std::size_t n, int sign) {
    static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto it = cache.find({n, sign});
    if (it != cache.end()) return it->second;
    std::vector<Complex> tmp(n);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(tmp.data()),
                                   reinterpret_cast<fftw_complex*>(tmp.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(std::make_pair(n, sign), p);
    return p;
}

fftw_plan plan_2d(std::size_t nx, std::size_t ny, int sign) {
    static std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto it = cache.find({nx, ny, sign});
    if (it != cache.end()) return it->second;
    std::vector<Complex> tmp(nx * ny);
    // FFTW's first dimension is the slowest-varying one; our layout is
    // row-major with iy slow, so the dims are (ny, nx).
    fftw_plan p = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx),
                                   reinterpret_cast<fftw_complex*>(tmp.data()),
                                   reinterpret_cast<fftw_complex*>(tmp.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(std::make_tuple(nx, ny, sign), p);
    return p;
}

} // namespace

void fft_inplace(Complex* data, std::size_t n, int sign) {
    fftw_plan p = plan_1d(n, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data), reinterpret_cast<fftw_complex*>(data));
}

void fft2_inplace(Complex* data, std::size_t nx, std::size_t ny, int sign) {
    fftw_plan p = plan_2d(nx, ny, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data), reinterpret_cast<fftw_complex*>(data));
}

} // namespace detail

Field1D dft_forward(const Field1D& field) {
    Field1D out = field;
    detail::fft_inplace(out.values.data(), out.values.size(), -1);
    return out;
}

Field1D dft_inverse(const Field1D& field) {
    Field1D out = field;
    detail::fft_inplace(out.values.data(), out.values.size(), +1);
    const double scale = 1.0 / static_cast<double>(out.values.size());
    for (auto& v : out.values) v *= scale;
    return out;
}

Field2D dft_forward(const Field2D& field) {
    Field2D out = field;
    detail::fft2_inplace(out.values.data(), out.grid.nx, out.grid.ny, -1);
    return out;
}

Field2D dft_inverse(const Field2D& field) {
    Field2D out = field;
    detail::fft2_inplace(out.values.data(), out.grid.nx, out.grid.ny, +1);
    const double scale = 1.0 / static_cast<double>(out.values.size());
    for (auto& v : out.values) v *= scale;
    return out;
}

} // namespace airybeam
