// SPDX-License-Identifier: Apache-2.0
#include "wavelearn/objective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wavelearn/errors.hpp"

namespace wavelearn {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Stable order of indices by ascending |c|; ties keep their original order
// so the gradient is deterministic.
std::vector<std::size_t> sorted_order(const std::vector<double>& c) {
    std::vector<std::size_t> order(c.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&c](std::size_t lhs, std::size_t rhs) {
        return std::fabs(c[lhs]) < std::fabs(c[rhs]);
    });
    return order;
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

} // namespace

double gini(const std::vector<double>& coefficients) {
    const std::size_t n = coefficients.size();
    if (n == 0) throw UndefinedSparsityError("empty coefficient set");
    std::vector<double> mags(n);
    for (std::size_t i = 0; i < n; ++i) mags[i] = std::fabs(coefficients[i]);
    std::sort(mags.begin(), mags.end());

    double weighted = 0.0, sum = 0.0;
    const double nd = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double rank = static_cast<double>(i + 1); // 1-based
        weighted += (2.0 * rank - nd - 1.0) * mags[i];
        sum += mags[i];
    }
    if (sum == 0.0) throw UndefinedSparsityError("all coefficients are zero");
    return weighted / (nd * sum);
}

double sparsity_cost(const std::vector<double>& coefficients) {
    return 1.0 - gini(coefficients);
}

std::vector<double> sparsity_gradient(const std::vector<double>& coefficients) {
    const std::size_t n = coefficients.size();
    if (n == 0) throw UndefinedSparsityError("empty coefficient set");
    const std::vector<std::size_t> order = sorted_order(coefficients);

    const double nd = static_cast<double>(n);
    double f = 0.0, g = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double mag = std::fabs(coefficients[order[i]]);
        f += (2.0 * static_cast<double>(i + 1) - nd - 1.0) * mag;
        g += nd * mag;
    }
    if (g == 0.0) throw UndefinedSparsityError("all coefficients are zero");

    std::vector<double> grad(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t src = order[i];
        const double value = coefficients[src];
        if (value == 0.0) continue; // zero coefficients must not move
        const double df = 2.0 * static_cast<double>(i + 1) - nd - 1.0;
        grad[src] = -sign_of(value) * (df * g - f * nd) / (g * g);
    }
    return grad;
}

std::array<double, 5> reg_cost(const FilterBank& fb) {
    return check_conditions(fb).residual;
}

std::vector<double> reg_gradient(const FilterBank& fb, const ConditionMask& mask) {
    const std::vector<double>& a = fb.lowpass();
    const std::vector<double> b = fb.highpass();
    const std::size_t n = a.size();
    std::vector<double> grad(n, 0.0);

    double sum_a = 0.0, sum_b = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sum_a += a[k];
        sum_b += b[k];
    }

    if (mask[0]) {
        const double factor = 2.0 * (sum_a - kSqrt2);
        for (std::size_t i = 0; i < n; ++i) grad[i] += factor;
    }

    // Conditions 2 and 3 share the derivative of the shift-2 products with
    // respect to {a}: a[i+2m] + a[i-2m], out-of-range entries read as zero.
    auto add_shift_terms = [&](const std::vector<double>& taps) {
        for (std::size_t m = 0; m < n / 2; ++m) {
            const std::size_t shift = 2 * m;
            double overlap = 0.0;
            for (std::size_t k = 0; k + shift < n; ++k) overlap += taps[k] * taps[k + shift];
            const double factor = 2.0 * (overlap - (m == 0 ? 1.0 : 0.0));
            for (std::size_t i = 0; i < n; ++i) {
                double d = 0.0;
                if (i + shift < n) d += a[i + shift];
                if (i >= shift) d += a[i - shift];
                grad[i] += factor * d;
            }
        }
    };
    if (mask[1]) add_shift_terms(a);
    if (mask[2]) add_shift_terms(b);

    if (mask[3]) {
        const double factor = 2.0 * sum_b;
        for (std::size_t i = 0; i < n; ++i) {
            const double sign = ((n - 1 - i) % 2 == 0) ? 1.0 : -1.0;
            grad[i] += factor * sign;
        }
    }

    // Condition 5 holds identically; its gradient is zero.
    return grad;
}

CostBreakdown total_cost(const std::vector<double>& coefficients, const FilterBank& fb,
                         double lambda, const ConditionMask& mask) {
    CostBreakdown out;
    out.sparsity = sparsity_cost(coefficients);
    out.lambda = lambda;
    const std::array<double, 5> reg = reg_cost(fb);
    double reg_sum = 0.0;
    for (std::size_t k = 0; k < 5; ++k) {
        out.reg[k] = mask[k] ? reg[k] : 0.0;
        reg_sum += out.reg[k];
    }
    out.total = out.sparsity + lambda * reg_sum;
    return out;
}

} // namespace wavelearn
