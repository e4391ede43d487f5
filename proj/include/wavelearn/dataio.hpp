// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wavelearn/filter_bank.hpp"
#include "wavelearn/signal.hpp"

namespace wavelearn {

/// An ordered collection of equally shaped signals plus a note on where
/// they came from (generator spec or source path).
struct Dataset {
    std::vector<Signal> signals;
    std::string provenance;

    std::size_t size() const { return signals.size(); }
    bool empty() const { return signals.empty(); }
};

enum class GeneratorKind { point_like, gaussian_blobs, sinusoid_noise, constant };

GeneratorKind parse_generator_kind(std::string_view name);
std::string to_string(GeneratorKind kind);

struct SignalShape {
    int dim = 1;
    std::size_t extent = 0;
};

/// "64" is a 1D length, "16x16" a square 2D shape.
SignalShape parse_shape(std::string_view text);

struct GenParams {
    int components = 3;       // spikes, blobs or sinusoids per signal
    double noise_sigma = 0.1; // white-noise level for sinusoid-noise
    double width = 0.0;       // blob standard deviation in samples; 0 = extent/16
};

/// Deterministic toy-signal generator: the same arguments always produce a
/// byte-identical dataset.
///  - point-like: k spikes of random amplitude at distinct positions
///  - gaussian-blobs: superposed isotropic Gaussian bumps
///  - sinusoid-noise: random-frequency, random-phase sinusoids plus noise
///  - constant: flat signals of random level
Dataset generate(GeneratorKind kind, SignalShape shape, int count, std::uint64_t seed,
                 const GenParams& params = {});

/// CSV dataset format. 1D: one signal per line, comma-separated values.
/// 2D: blocks of 2^M lines x 2^M columns, a blank line after each block.
Dataset read_csv(const std::string& path);
void write_csv(const Dataset& dataset, const std::string& path);

/// Filter persistence: line 1 is the tap count, line 2 the taps with 17
/// significant digits. load(save(fb)) restores the taps exactly.
void save_filter(const FilterBank& fb, const std::string& path);
FilterBank load_filter(const std::string& path);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

} // namespace wavelearn
