// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "wavelearn/dwt.hpp"
#include "wavelearn/filter_bank.hpp"
#include "wavelearn/signal.hpp"

namespace wavelearn {

/// Forward-pass activations cached for the backward pass: lows[k] is the
/// signal low-pass filtered down to scale M-k, so lows[0] is the input and
/// lows[M] the single remaining average.
struct LayerTrace {
    std::vector<std::vector<double>> lows;
};

LayerTrace record_forward_1d(const std::vector<double>& f, const FilterBank& fb);

/// Back-propagates a coefficient-space gradient through every analysis
/// level down to one gradient per filter tap. All structured-matrix entries
/// occupied by a tap contribute (upstream gradient x input activation),
/// summed; high-pass entries carry the alternating sign of the derived
/// filter; wrapped occurrences add. The result always has length N_filt.
std::vector<double> filter_gradient_1d(const Signal& f, const FilterBank& fb,
                                       const std::vector<double>& coeff_gradient);

/// 2D variant: back-propagates through the column pass, then the row pass,
/// accumulating into the same tap gradient. coeff_gradient is row-major
/// with the signal's shape.
std::vector<double> filter_gradient_2d(const Signal& f, const FilterBank& fb,
                                       const std::vector<double>& coeff_gradient);

std::vector<double> filter_gradient(const Signal& f, const FilterBank& fb,
                                    const std::vector<double>& coeff_gradient);

} // namespace wavelearn
