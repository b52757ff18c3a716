#pragma once

#include "hmdchan/tensor.hpp"

#include <cstddef>
#include <span>

namespace hmdchan
{

// Unnormalized forward DFT along the delay axis of every (rx, tx) pair:
//   H[k] = sum_n h[n] exp(-j 2 pi k n / n_points),  k in [0, n_points).
// Taps are zero-padded when n_points > n_tap. n_points == 0 means n_tap.
CtfSnapshot fft_delay_axis(const CirSnapshot &cir, std::size_t n_points = 0);

// In-place variant for the n_points == n_tap case; reuses the CIR storage.
CtfSnapshot fft_delay_axis(CirSnapshot &&cir);

// Unnormalized forward DFT of one sequence, in place.
void fft_inplace(std::span<cplx> x);

} // namespace hmdchan
