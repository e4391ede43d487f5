// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "wavelearn/filter_bank.hpp"
#include "wavelearn/signal.hpp"

namespace wavelearn {

/// Transform output. Same storage and element count as the originating
/// signal. 1D layout is dyadic: index 0 is the global average, index 1 the
/// coarsest detail, indices [2^m, 2^{m+1}) the scale-m details. 2D holds the
/// row-then-column transformed matrix.
using WaveletCoefficients = Signal;

/// One analysis halving step: y[r] = sum_j taps[N-1-j] * x[(2r+j) mod n]
/// with n = x.size() (even). Equivalent to applying filter_matrix(taps, m)
/// with 2^{m+1} = n, without building it.
std::vector<double> filter_down(const std::vector<double>& taps, const std::vector<double>& x);

/// Transposed step: y = filter_matrix(taps, m)^T x, doubling the length.
std::vector<double> filter_up(const std::vector<double>& taps, const std::vector<double>& x);

// Vector-level transforms used by the Signal API and the gradient code.
std::vector<double> forward_vec(const std::vector<double>& f, const FilterBank& fb);
std::vector<double> inverse_vec(const std::vector<double>& c, const FilterBank& fb);

WaveletCoefficients forward_1d(const Signal& f, const FilterBank& fb);
Signal inverse_1d(const WaveletCoefficients& c, const FilterBank& fb);

/// 2D scheme: the full 1D transform of every row, then the full 1D
/// transform of every column of the result. The inverse applies the exact
/// reverse order.
WaveletCoefficients forward_2d(const Signal& f, const FilterBank& fb);
Signal inverse_2d(const WaveletCoefficients& c, const FilterBank& fb);

/// Dispatch on signal dimensionality.
WaveletCoefficients forward(const Signal& f, const FilterBank& fb);
Signal inverse(const WaveletCoefficients& c, const FilterBank& fb);

/// Position-space basis function: the inverse transform of a one-hot
/// coefficient array of size 2^levels (1D) or 2^levels square (2D).
Signal basis_function(const FilterBank& fb, int levels, std::size_t index);
Signal basis_function(const FilterBank& fb, int levels, std::size_t row, std::size_t col);

} // namespace wavelearn
