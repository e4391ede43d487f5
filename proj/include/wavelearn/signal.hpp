// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "wavelearn/errors.hpp"

namespace wavelearn {

inline bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

inline int log2_exact(std::size_t n) {
    int m = 0;
    while ((std::size_t{1} << m) < n) ++m;
    return m;
}

/// A 1D vector of length 2^M, or a 2D square matrix 2^M x 2^M stored
/// row-major. Every dimension is an exact power of two.
struct Signal {
    int dim = 1;
    std::size_t extent = 0;
    std::vector<double> values;

    static Signal vector(std::vector<double> v) {
        if (!is_power_of_two(v.size()))
            throw ShapeError("1D signal length must be a power of two, got " +
                             std::to_string(v.size()));
        Signal s;
        s.dim = 1;
        s.extent = v.size();
        s.values = std::move(v);
        return s;
    }

    static Signal matrix(std::size_t side, std::vector<double> v) {
        if (!is_power_of_two(side))
            throw ShapeError("2D signal side must be a power of two, got " +
                             std::to_string(side));
        if (v.size() != side * side)
            throw ShapeError("2D signal needs " + std::to_string(side * side) +
                             " values, got " + std::to_string(v.size()));
        Signal s;
        s.dim = 2;
        s.extent = side;
        s.values = std::move(v);
        return s;
    }

    static Signal zeros(int dim, std::size_t extent) {
        return dim == 1 ? vector(std::vector<double>(extent, 0.0))
                        : matrix(extent, std::vector<double>(extent * extent, 0.0));
    }

    std::size_t size() const { return values.size(); }

    /// Scale exponent M with extent = 2^M.
    int levels() const { return log2_exact(extent); }

    double& at(std::size_t r, std::size_t c) { return values[r * extent + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * extent + c]; }

    bool same_shape(const Signal& other) const {
        return dim == other.dim && extent == other.extent;
    }
};

} // namespace wavelearn
