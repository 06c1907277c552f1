#pragma once

#include <vector>

#include "phasefront/types.hpp"

namespace phasefront::fft {

/// In-place unscaled forward DFT (FFTW sign convention e^{-i...}).
void forward(std::vector<cplx>& data);
/// In-place inverse DFT scaled by 1/n.
void inverse(std::vector<cplx>& data);

/// 2-d transforms on row-major n0 x n1 data.
void forward2(std::vector<cplx>& data, int n0, int n1);
void inverse2(std::vector<cplx>& data, int n0, int n1);

/// Continuous frequencies pi*k'/L in FFTW bin order for a 2L-periodic grid
/// of n points (k' = k for k < n/2, k - n otherwise).
std::vector<double> frequencies(int n, double half_width);

}  // namespace phasefront::fft
