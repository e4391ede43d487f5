// SPDX-License-Identifier: Apache-2.0
#include "wavelearn/filter_bank.hpp"

#include <cmath>
#include <string>

namespace wavelearn {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

std::vector<double> derive_highpass(const std::vector<double>& a) {
    const std::size_t n = a.size();
    if (n == 0 || n % 2 != 0)
        throw InvalidFilterError("filter length must be even and positive, got " +
                                 std::to_string(n));
    std::vector<double> b(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        b[k] = sign * a[n - 1 - k];
    }
    return b;
}

FilterBank::FilterBank(std::vector<double> coefficients) : a_(std::move(coefficients)) {
    if (a_.empty() || a_.size() % 2 != 0)
        throw InvalidFilterError("filter length must be even and positive, got " +
                                 std::to_string(a_.size()));
}

FilterBank FilterBank::haar() {
    const double s = 1.0 / kSqrt2;
    return FilterBank({s, s});
}

FilterBank FilterBank::daubechies4() {
    const double r3 = std::sqrt(3.0);
    const double norm = 4.0 * kSqrt2;
    return FilterBank({(1.0 + r3) / norm, (3.0 + r3) / norm, (3.0 - r3) / norm,
                       (1.0 - r3) / norm});
}

namespace {

// Shift-2 overlap sum_k v[k] v[k+2m]; indices outside the filter are zero.
double shift2_product(const std::vector<double>& v, std::size_t m) {
    const std::size_t n = v.size();
    const std::size_t shift = 2 * m;
    double sum = 0.0;
    for (std::size_t k = 0; k + shift < n; ++k) sum += v[k] * v[k + shift];
    return sum;
}

} // namespace

ConditionReport check_conditions(const FilterBank& fb) {
    const std::vector<double>& a = fb.lowpass();
    const std::vector<double> b = fb.highpass();
    const std::size_t n = a.size();

    ConditionReport report;

    double sum_a = 0.0, sum_b = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sum_a += a[k];
        sum_b += b[k];
    }
    const double d1 = sum_a - kSqrt2;
    report.residual[0] = d1 * d1;

    // Shifts beyond the filter support vanish identically, so m ranges over
    // [0, n/2 - 1].
    double r2 = 0.0, r3 = 0.0;
    for (std::size_t m = 0; m < n / 2; ++m) {
        const double target = (m == 0) ? 1.0 : 0.0;
        const double d2 = shift2_product(a, m) - target;
        const double d3 = shift2_product(b, m) - target;
        r2 += d2 * d2;
        r3 += d3 * d3;
    }
    report.residual[1] = r2;
    report.residual[2] = r3;

    report.residual[3] = sum_b * sum_b;

    // Cross-orthogonality holds identically through the high-pass
    // construction.
    report.residual[4] = 0.0;

    return report;
}

Matrix filter_matrix(const std::vector<double>& taps, int scale) {
    if (scale < 0) throw ShapeError("scale must be nonnegative");
    const std::size_t n = taps.size();
    const std::size_t rows = std::size_t{1} << scale;
    const std::size_t cols = rows * 2;
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < n; ++j) {
            m(r, (2 * r + j) % cols) += taps[n - 1 - j];
        }
    }
    return m;
}

Matrix lowpass_matrix(const FilterBank& fb, int scale) {
    return filter_matrix(fb.lowpass(), scale);
}

Matrix highpass_matrix(const FilterBank& fb, int scale) {
    return filter_matrix(fb.highpass(), scale);
}

} // namespace wavelearn
