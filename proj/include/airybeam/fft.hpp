#pragma once

#include "airybeam/grid.hpp"

namespace airybeam {

/// Unnormalized forward DFT, F_k = sum_n f_n exp(-j 2 pi k n / N).
/// Bin k carries spatial frequency f_k = k/(n*dx) with standard wraparound
/// ordering (k > n/2 maps to k - n). dft_inverse carries the 1/N scale so the
/// roundtrip is the identity.
Field1D dft_forward(const Field1D& field);
Field1D dft_inverse(const Field1D& field);

Field2D dft_forward(const Field2D& field);
Field2D dft_inverse(const Field2D& field);

namespace detail {
// In-place transforms on raw buffers; sign = -1 forward, +1 inverse (inverse
// is unscaled here, callers divide by the sample count).
void fft_inplace(Complex* data, std::size_t n, int sign);
void fft2_inplace(Complex* data, std::size_t nx, std::size_t ny, int sign);

/// Wrapped frequency of bin k on an n-point grid with pitch dx
/// (bins >= n/2 are the negative frequencies).
inline double frequency(std::size_t k, std::size_t n, double dx) {
    const double kk = (k < n / 2) ? static_cast<double>(k)
                                  : static_cast<double>(k) - static_cast<double>(n);
    return kk / (static_cast<double>(n) * dx);
}
}

} // namespace airybeam
