#pragma once

#include <complex>
#include <vector>

#include "nonloc/grid.hpp"

namespace nonloc::detail {

/// Unnormalised in-place multidimensional DFT over the whole grid
/// (FFTW sign convention: forward uses exp(-i k x)).
void fft_forward(const Grid& grid, std::vector<std::complex<double>>& data);
void fft_backward(const Grid& grid, std::vector<std::complex<double>>& data);

}  // namespace nonloc::detail
