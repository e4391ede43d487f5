// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "wavelearn/filter_bank.hpp"

namespace wavelearn {

/// Per-condition on/off switches, in condition order. Disabled conditions
/// contribute neither cost nor gradient.
using ConditionMask = std::array<bool, 5>;
inline constexpr ConditionMask all_conditions{true, true, true, true, true};

struct CostBreakdown {
    double sparsity = 0.0;
    std::array<double, 5> reg{};
    double lambda = 0.0;
    double total = 0.0; // sparsity + lambda * sum(reg)
};

/// Gini coefficient of the coefficient magnitudes: 0 for a perfectly equal
/// distribution, (N-1)/N for a single spike. Throws UndefinedSparsityError
/// when every coefficient is zero.
double gini(const std::vector<double>& coefficients);

/// Sparsity cost 1 - gini; lower is sparser.
double sparsity_cost(const std::vector<double>& coefficients);

/// Gradient of sparsity_cost with respect to each (signed) coefficient.
/// Entries that are exactly zero get an exactly zero gradient: such
/// coefficients already contribute maximally to sparsity and must not move.
std::vector<double> sparsity_gradient(const std::vector<double>& coefficients);

/// The five quadratic condition costs (the check_conditions residuals).
std::array<double, 5> reg_cost(const FilterBank& fb);

/// Filter-space gradient of the summed condition costs, honoring the mask.
std::vector<double> reg_gradient(const FilterBank& fb, const ConditionMask& mask = all_conditions);

/// Combined objective for one coefficient set and filter configuration.
/// Masked-off conditions are reported as zero and excluded from the total.
CostBreakdown total_cost(const std::vector<double>& coefficients, const FilterBank& fb,
                         double lambda, const ConditionMask& mask = all_conditions);

} // namespace wavelearn
