// SPDX-License-Identifier: Apache-2.0
#include "wavelearn/dwt.hpp"

#include <stdexcept>
#include <string>

namespace wavelearn {

std::vector<double> filter_down(const std::vector<double>& taps, const std::vector<double>& x) {
    const std::size_t n = x.size();
    const std::size_t mask = n - 1; // n is a power of two
    const std::size_t nt = taps.size();
    std::vector<double> out(n / 2, 0.0);
    for (std::size_t r = 0; r < n / 2; ++r) {
        double acc = 0.0;
        for (std::size_t j = 0; j < nt; ++j) acc += taps[nt - 1 - j] * x[(2 * r + j) & mask];
        out[r] = acc;
    }
    return out;
}

std::vector<double> filter_up(const std::vector<double>& taps, const std::vector<double>& x) {
    const std::size_t rows = x.size();
    const std::size_t n = rows * 2;
    const std::size_t mask = n - 1;
    const std::size_t nt = taps.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        const double xr = x[r];
        for (std::size_t j = 0; j < nt; ++j) out[(2 * r + j) & mask] += taps[nt - 1 - j] * xr;
    }
    return out;
}

std::vector<double> forward_vec(const std::vector<double>& f, const FilterBank& fb) {
    if (!is_power_of_two(f.size()))
        throw ShapeError("transform input length must be a power of two, got " +
                         std::to_string(f.size()));
    const std::vector<double>& a = fb.lowpass();
    const std::vector<double> b = fb.highpass();
    std::vector<double> c(f.size());
    std::vector<double> low = f;
    std::size_t n = f.size();
    while (n > 1) {
        const std::vector<double> detail = filter_down(b, low);
        low = filter_down(a, low);
        for (std::size_t i = 0; i < n / 2; ++i) c[n / 2 + i] = detail[i];
        n /= 2;
    }
    c[0] = low[0];
    return c;
}

std::vector<double> inverse_vec(const std::vector<double>& c, const FilterBank& fb) {
    if (!is_power_of_two(c.size()))
        throw ShapeError("coefficient array length must be a power of two, got " +
                         std::to_string(c.size()));
    const std::vector<double>& a = fb.lowpass();
    const std::vector<double> b = fb.highpass();
    std::vector<double> f{c[0]};
    while (f.size() < c.size()) {
        const std::size_t half = f.size();
        std::vector<double> detail(c.begin() + half, c.begin() + 2 * half);
        std::vector<double> up = filter_up(a, f);
        const std::vector<double> hup = filter_up(b, detail);
        for (std::size_t i = 0; i < up.size(); ++i) up[i] += hup[i];
        f = std::move(up);
    }
    return f;
}

WaveletCoefficients forward_1d(const Signal& f, const FilterBank& fb) {
    if (f.dim != 1) throw ShapeError("forward_1d expects a 1D signal");
    return Signal::vector(forward_vec(f.values, fb));
}

Signal inverse_1d(const WaveletCoefficients& c, const FilterBank& fb) {
    if (c.dim != 1) throw ShapeError("inverse_1d expects 1D coefficients");
    return Signal::vector(inverse_vec(c.values, fb));
}

namespace {

std::vector<double> extract_column(const Signal& s, std::size_t col) {
    std::vector<double> out(s.extent);
    for (std::size_t r = 0; r < s.extent; ++r) out[r] = s.at(r, col);
    return out;
}

} // namespace

WaveletCoefficients forward_2d(const Signal& f, const FilterBank& fb) {
    if (f.dim != 2) throw ShapeError("forward_2d expects a 2D signal");
    const std::size_t n = f.extent;
    Signal out = f;
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<double> row(out.values.begin() + r * n, out.values.begin() + (r + 1) * n);
        row = forward_vec(row, fb);
        for (std::size_t c = 0; c < n; ++c) out.at(r, c) = row[c];
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<double> col = forward_vec(extract_column(out, c), fb);
        for (std::size_t r = 0; r < n; ++r) out.at(r, c) = col[r];
    }
    return out;
}

Signal inverse_2d(const WaveletCoefficients& c, const FilterBank& fb) {
    if (c.dim != 2) throw ShapeError("inverse_2d expects 2D coefficients");
    const std::size_t n = c.extent;
    Signal out = c;
    for (std::size_t col = 0; col < n; ++col) {
        std::vector<double> v = inverse_vec(extract_column(out, col), fb);
        for (std::size_t r = 0; r < n; ++r) out.at(r, col) = v[r];
    }
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<double> row(out.values.begin() + r * n, out.values.begin() + (r + 1) * n);
        row = inverse_vec(row, fb);
        for (std::size_t col = 0; col < n; ++col) out.at(r, col) = row[col];
    }
    return out;
}

WaveletCoefficients forward(const Signal& f, const FilterBank& fb) {
    return f.dim == 1 ? forward_1d(f, fb) : forward_2d(f, fb);
}

Signal inverse(const WaveletCoefficients& c, const FilterBank& fb) {
    return c.dim == 1 ? inverse_1d(c, fb) : inverse_2d(c, fb);
}

Signal basis_function(const FilterBank& fb, int levels, std::size_t index) {
    const std::size_t n = std::size_t{1} << levels;
    if (index >= n)
        throw std::out_of_range("basis index " + std::to_string(index) + " out of range [0, " +
                                std::to_string(n) + ")");
    Signal c = Signal::zeros(1, n);
    c.values[index] = 1.0;
    return inverse_1d(c, fb);
}

Signal basis_function(const FilterBank& fb, int levels, std::size_t row, std::size_t col) {
    const std::size_t n = std::size_t{1} << levels;
    if (row >= n || col >= n)
        throw std::out_of_range("basis index (" + std::to_string(row) + ", " +
                                std::to_string(col) + ") out of range [0, " + std::to_string(n) +
                                ")^2");
    Signal c = Signal::zeros(2, n);
    c.at(row, col) = 1.0;
    return inverse_2d(c, fb);
}

} // namespace wavelearn
