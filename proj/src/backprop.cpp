// SPDX-License-Identifier: Apache-2.0
#include "wavelearn/backprop.hpp"

#include <string>

#include "wavelearn/errors.hpp"
#include "wavelearn/matrix.hpp"

namespace wavelearn {

namespace {

// Below this width the transposed operators are applied through explicitly
// built matrices; above it through the strided scatter. Both routes agree
// within 1e-15 on doubles (covered by tests).
constexpr std::size_t kExplicitMatrixMaxCols = 16;

void apply_transposed_pair(const std::vector<double>& a, const std::vector<double>& b,
                           const std::vector<double>& u, const std::vector<double>& v,
                           std::vector<double>& out) {
    const std::size_t rows = u.size();
    const std::size_t n = rows * 2;
    out.assign(n, 0.0);
    if (n <= kExplicitMatrixMaxCols) {
        int scale = 0;
        while ((std::size_t{1} << scale) < rows) ++scale;
        const Matrix low = filter_matrix(a, scale);
        const Matrix high = filter_matrix(b, scale);
        for (std::size_t c = 0; c < n; ++c) {
            double acc = 0.0;
            for (std::size_t r = 0; r < rows; ++r) acc += low(r, c) * u[r] + high(r, c) * v[r];
            out[c] = acc;
        }
        return;
    }
    const std::size_t mask = n - 1;
    const std::size_t nt = a.size();
    for (std::size_t r = 0; r < rows; ++r) {
        const double ur = u[r];
        const double vr = v[r];
        for (std::size_t j = 0; j < nt; ++j)
            out[(2 * r + j) & mask] += a[nt - 1 - j] * ur + b[nt - 1 - j] * vr;
    }
}

// Accumulates tap gradients and propagates the signal gradient through one
// analysis level. x is the level input f_{m+1}, u the gradient on the
// low-pass output, v the gradient on the detail output.
void backprop_level(const std::vector<double>& a, const std::vector<double>& b,
                    const std::vector<double>& x, const std::vector<double>& u,
                    const std::vector<double>& v, std::vector<double>& grad,
                    std::vector<double>& next_u) {
    const std::size_t n = x.size();
    const std::size_t mask = n - 1;
    const std::size_t nt = a.size();
    // Low-pass layer: output r reads tap p = nt-1-j from column (2r+j).
    for (std::size_t r = 0; r < n / 2; ++r) {
        const double ur = u[r];
        if (ur == 0.0) continue;
        for (std::size_t j = 0; j < nt; ++j) grad[nt - 1 - j] += ur * x[(2 * r + j) & mask];
    }
    // High-pass layer: entry holding b[nt-1-p] is (-1)^{nt-1-p} a[p], so tap
    // p collects the column at offset p with that sign.
    for (std::size_t r = 0; r < n / 2; ++r) {
        const double vr = v[r];
        if (vr == 0.0) continue;
        for (std::size_t p = 0; p < nt; ++p) {
            const double sign = ((nt - 1 - p) % 2 == 0) ? 1.0 : -1.0;
            grad[p] += sign * vr * x[(2 * r + p) & mask];
        }
    }
    apply_transposed_pair(a, b, u, v, next_u);
}

// Core 1D pass. Returns the gradient with respect to the input signal;
// tap gradients accumulate into grad.
std::vector<double> backprop_vec(const std::vector<double>& f, const FilterBank& fb,
                                 const std::vector<double>& coeff_gradient,
                                 std::vector<double>& grad) {
    const LayerTrace trace = record_forward_1d(f, fb);
    const std::vector<double>& a = fb.lowpass();
    const std::vector<double> b = fb.highpass();
    const int levels = static_cast<int>(trace.lows.size()) - 1;

    std::vector<double> u{coeff_gradient[0]};
    std::vector<double> next_u;
    for (int m = 0; m < levels; ++m) {
        const std::size_t half = std::size_t{1} << m;
        const std::vector<double>& x = trace.lows[levels - (m + 1)];
        const std::vector<double> v(coeff_gradient.begin() + half,
                                    coeff_gradient.begin() + 2 * half);
        backprop_level(a, b, x, u, v, grad, next_u);
        u = std::move(next_u);
    }
    return u;
}

} // namespace

LayerTrace record_forward_1d(const std::vector<double>& f, const FilterBank& fb) {
    if (!is_power_of_two(f.size()))
        throw ShapeError("transform input length must be a power of two, got " +
                         std::to_string(f.size()));
    LayerTrace trace;
    trace.lows.push_back(f);
    const std::vector<double>& a = fb.lowpass();
    while (trace.lows.back().size() > 1) trace.lows.push_back(filter_down(a, trace.lows.back()));
    return trace;
}

std::vector<double> filter_gradient_1d(const Signal& f, const FilterBank& fb,
                                       const std::vector<double>& coeff_gradient) {
    if (f.dim != 1) throw ShapeError("filter_gradient_1d expects a 1D signal");
    if (coeff_gradient.size() != f.size())
        throw ShapeError("coefficient gradient length " + std::to_string(coeff_gradient.size()) +
                         " does not match signal length " + std::to_string(f.size()));
    std::vector<double> grad(fb.size(), 0.0);
    backprop_vec(f.values, fb, coeff_gradient, grad);
    return grad;
}

std::vector<double> filter_gradient_2d(const Signal& f, const FilterBank& fb,
                                       const std::vector<double>& coeff_gradient) {
    if (f.dim != 2) throw ShapeError("filter_gradient_2d expects a 2D signal");
    if (coeff_gradient.size() != f.size())
        throw ShapeError("coefficient gradient size " + std::to_string(coeff_gradient.size()) +
                         " does not match signal size " + std::to_string(f.size()));
    const std::size_t n = f.extent;
    std::vector<double> grad(fb.size(), 0.0);

    // Redo the row pass to recover the column-pass inputs.
    Signal rowpass = f;
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<double> row(rowpass.values.begin() + r * n,
                                rowpass.values.begin() + (r + 1) * n);
        row = forward_vec(row, fb);
        for (std::size_t c = 0; c < n; ++c) rowpass.at(r, c) = row[c];
    }

    // Column pass backward: yields the gradient on the row-pass output.
    Signal drow = f; // reused as storage for dJ/d(rowpass)
    std::vector<double> col(n), dcol(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 0; r < n; ++r) {
            col[r] = rowpass.at(r, c);
            dcol[r] = coeff_gradient[r * n + c];
        }
        const std::vector<double> dy = backprop_vec(col, fb, dcol, grad);
        for (std::size_t r = 0; r < n; ++r) drow.at(r, c) = dy[r];
    }

    // Row pass backward on the original signal rows.
    for (std::size_t r = 0; r < n; ++r) {
        const std::vector<double> row(f.values.begin() + r * n, f.values.begin() + (r + 1) * n);
        const std::vector<double> dr(drow.values.begin() + r * n,
                                     drow.values.begin() + (r + 1) * n);
        backprop_vec(row, fb, dr, grad);
    }
    return grad;
}

std::vector<double> filter_gradient(const Signal& f, const FilterBank& fb,
                                    const std::vector<double>& coeff_gradient) {
    return f.dim == 1 ? filter_gradient_1d(f, fb, coeff_gradient)
                      : filter_gradient_2d(f, fb, coeff_gradient);
}

} // namespace wavelearn
