// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "wavelearn/errors.hpp"
#include "wavelearn/matrix.hpp"

namespace wavelearn {

/// High-pass taps derived from the low-pass taps by index reflection with
/// alternating sign: b[k] = (-1)^k * a[N-1-k]. Requires even length.
std::vector<double> derive_highpass(const std::vector<double>& a);

/// An orthonormal filter bank candidate. The low-pass coefficients {a} are
/// the only stored state; the high-pass filter is always recomputed from
/// them, never stored.
class FilterBank {
public:
    explicit FilterBank(std::vector<double> coefficients);

    static FilterBank haar();
    static FilterBank daubechies4();

    const std::vector<double>& lowpass() const { return a_; }
    std::vector<double> highpass() const { return derive_highpass(a_); }
    std::size_t size() const { return a_.size(); }

private:
    std::vector<double> a_;
};

/// Squared residuals of the five admissibility conditions:
///   1. tap sum equals sqrt(2)
///   2. shift-2 self-products of {a} reproduce the delta
///   3. same for {b}
///   4. {b} sums to zero
///   5. cross products of {a} and {b} vanish -- holds identically by the
///      construction of {b}, so residual[4] is exactly 0.
struct ConditionReport {
    std::array<double, 5> residual{};

    double total() const {
        double t = 0.0;
        for (double r : residual) t += r;
        return t;
    }
};

ConditionReport check_conditions(const FilterBank& fb);

/// Structured 2^m x 2^{m+1} analysis operator for the given taps: row r
/// holds the reversed filter starting at column 2r with circular wrap,
/// taps[0] landing rightmost. Rows are 2-shifted copies of each other.
/// When the filter is longer than the row, wrapped taps accumulate.
Matrix filter_matrix(const std::vector<double>& taps, int scale);

Matrix lowpass_matrix(const FilterBank& fb, int scale);
Matrix highpass_matrix(const FilterBank& fb, int scale);

} // namespace wavelearn
