#pragma once

#include <complex>

namespace wck::fft {

// In-place unnormalized DFT of an N x N row-major array; sign -1 forward.
void transform2(std::complex<double>* data, int N, int sign);
// In-place DFT along one axis only (axis 1 = within rows).
void transform_axis(std::complex<double>* data, int N, int axis, int sign);

}  // namespace wck::fft
