// SPDX-License-Identifier: Apache-2.0
#include "wavelearn/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wavelearn/errors.hpp"
#include "wavelearn/rng.hpp"

namespace wavelearn {

GeneratorKind parse_generator_kind(std::string_view name) {
    if (name == "point-like") return GeneratorKind::point_like;
    if (name == "gaussian-blobs") return GeneratorKind::gaussian_blobs;
    if (name == "sinusoid-noise") return GeneratorKind::sinusoid_noise;
    if (name == "constant") return GeneratorKind::constant;
    throw std::invalid_argument("unknown generator kind: " + std::string(name));
}

std::string to_string(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::point_like: return "point-like";
        case GeneratorKind::gaussian_blobs: return "gaussian-blobs";
        case GeneratorKind::sinusoid_noise: return "sinusoid-noise";
        case GeneratorKind::constant: return "constant";
    }
    return "?";
}

SignalShape parse_shape(std::string_view text) {
    SignalShape shape;
    const auto cross = text.find('x');
    std::string_view first = text.substr(0, cross);
    std::size_t value = 0;
    auto res = std::from_chars(first.data(), first.data() + first.size(), value);
    if (res.ec != std::errc{} || res.ptr != first.data() + first.size())
        throw std::invalid_argument("bad shape: " + std::string(text));
    if (cross == std::string_view::npos) {
        shape.dim = 1;
    } else {
        std::string_view second = text.substr(cross + 1);
        std::size_t other = 0;
        res = std::from_chars(second.data(), second.data() + second.size(), other);
        if (res.ec != std::errc{} || res.ptr != second.data() + second.size())
            throw std::invalid_argument("bad shape: " + std::string(text));
        if (other != value)
            throw std::invalid_argument("2D shapes must be square, got " + std::string(text));
        shape.dim = 2;
    }
    shape.extent = value;
    if (!is_power_of_two(shape.extent))
        throw std::invalid_argument("shape extent must be a power of two, got " +
                                    std::to_string(shape.extent));
    return shape;
}

namespace {

constexpr double kTwoPi = 6.283185307179586;

void fill_point_like(Rng& rng, Signal& s, const GenParams& p) {
    const std::size_t total = s.size();
    const int k = std::min<std::size_t>(std::max(p.components, 1), total);
    std::vector<std::size_t> used;
    for (int i = 0; i < k; ++i) {
        std::size_t pos;
        do {
            pos = rng.below(total);
        } while (std::find(used.begin(), used.end(), pos) != used.end());
        used.push_back(pos);
        s.values[pos] = rng.uniform(0.5, 2.0);
    }
}

void fill_gaussian_blobs(Rng& rng, Signal& s, const GenParams& p) {
    const double n = static_cast<double>(s.extent);
    const double sigma = p.width > 0.0 ? p.width : std::max(n / 16.0, 0.75);
    const int k = std::max(p.components, 1);
    for (int i = 0; i < k; ++i) {
        const double cx = rng.uniform(0.0, n);
        const double cy = s.dim == 2 ? rng.uniform(0.0, n) : 0.0;
        const double amp = rng.uniform(0.5, 2.0);
        if (s.dim == 1) {
            for (std::size_t x = 0; x < s.extent; ++x) {
                const double d = static_cast<double>(x) - cx;
                s.values[x] += amp * std::exp(-d * d / (2.0 * sigma * sigma));
            }
        } else {
            for (std::size_t r = 0; r < s.extent; ++r) {
                for (std::size_t col = 0; col < s.extent; ++col) {
                    const double dr = static_cast<double>(r) - cy;
                    const double dc = static_cast<double>(col) - cx;
                    s.at(r, col) += amp * std::exp(-(dr * dr + dc * dc) / (2.0 * sigma * sigma));
                }
            }
        }
    }
}

void fill_sinusoid_noise(Rng& rng, Signal& s, const GenParams& p) {
    const double n = static_cast<double>(s.extent);
    const int k = std::max(p.components, 1);
    for (int i = 0; i < k; ++i) {
        const double amp = rng.uniform(0.5, 1.5);
        const double phase = rng.uniform(0.0, kTwoPi);
        if (s.dim == 1) {
            const double freq = static_cast<double>(rng.below(s.extent / 2) + 1);
            for (std::size_t x = 0; x < s.extent; ++x)
                s.values[x] += amp * std::sin(kTwoPi * freq * static_cast<double>(x) / n + phase);
        } else {
            const double fx = static_cast<double>(rng.below(s.extent / 2) + 1);
            const double fy = static_cast<double>(rng.below(s.extent / 2 + 1));
            for (std::size_t r = 0; r < s.extent; ++r)
                for (std::size_t c = 0; c < s.extent; ++c)
                    s.at(r, c) += amp * std::sin(kTwoPi *
                                                     (fx * static_cast<double>(c) +
                                                      fy * static_cast<double>(r)) /
                                                     n +
                                                 phase);
        }
    }
    if (p.noise_sigma > 0.0)
        for (double& v : s.values) v += p.noise_sigma * rng.normal();
}

} // namespace

Dataset generate(GeneratorKind kind, SignalShape shape, int count, std::uint64_t seed,
                 const GenParams& params) {
    if (count < 1) throw std::invalid_argument("signal count must be positive");
    if (shape.dim != 1 && shape.dim != 2) throw std::invalid_argument("shape dim must be 1 or 2");
    if (!is_power_of_two(shape.extent))
        throw ShapeError("shape extent must be a power of two, got " +
                         std::to_string(shape.extent));
    if (kind != GeneratorKind::constant && shape.extent < 2)
        throw ShapeError("generator needs extent >= 2");

    Rng rng(seed);
    Dataset out;
    out.signals.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Signal s = Signal::zeros(shape.dim, shape.extent);
        switch (kind) {
            case GeneratorKind::point_like: fill_point_like(rng, s, params); break;
            case GeneratorKind::gaussian_blobs: fill_gaussian_blobs(rng, s, params); break;
            case GeneratorKind::sinusoid_noise: fill_sinusoid_noise(rng, s, params); break;
            case GeneratorKind::constant: {
                const double level = rng.uniform(0.5, 2.0);
                for (double& v : s.values) v = level;
                break;
            }
        }
        out.signals.push_back(std::move(s));
    }
    std::ostringstream prov;
    prov << to_string(kind) << " " << shape.extent;
    if (shape.dim == 2) prov << "x" << shape.extent;
    prov << " count=" << count << " seed=" << seed;
    out.provenance = prov.str();
    return out;
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace {

std::string format_double_17(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

struct Line {
    std::string_view text;
    std::size_t number; // 1-based
};

std::vector<Line> split_lines(std::string_view content) {
    std::vector<Line> lines;
    std::size_t start = 0, number = 1;
    while (start <= content.size()) {
        const std::size_t end = content.find('\n', start);
        if (end == std::string_view::npos) {
            if (start < content.size()) lines.push_back({content.substr(start), number});
            break;
        }
        std::string_view text = content.substr(start, end - start);
        if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
        lines.push_back({text, number});
        start = end + 1;
        ++number;
    }
    return lines;
}

std::vector<double> parse_fields(const Line& line) {
    std::vector<double> values;
    std::string_view text = line.text;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        std::string_view field = text.substr(pos, comma - pos);
        while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
            field.remove_prefix(1);
        while (!field.empty() && (field.back() == ' ' || field.back() == '\t'))
            field.remove_suffix(1);
        double v = 0.0;
        const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
        if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
            throw ParseError("non-numeric field '" + std::string(field) + "'", line.number);
        values.push_back(v);
        if (comma == text.size()) break;
        pos = comma + 1;
    }
    return values;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

Dataset read_csv(const std::string& path) {
    const std::string content = read_file(path);
    const std::vector<Line> lines = split_lines(content);

    bool has_blank = false;
    for (const Line& l : lines)
        if (l.text.empty()) has_blank = true;

    Dataset out;
    out.provenance = path;

    if (!has_blank) {
        // 1D: one signal per line
        for (const Line& l : lines) {
            std::vector<double> values = parse_fields(l);
            if (!is_power_of_two(values.size()))
                throw ParseError("non-radix-2 signal length " + std::to_string(values.size()),
                                 l.number);
            if (!out.signals.empty() && values.size() != out.signals.front().extent)
                throw ParseError("ragged rows: expected " +
                                     std::to_string(out.signals.front().extent) + " values, got " +
                                     std::to_string(values.size()),
                                 l.number);
            out.signals.push_back(Signal::vector(std::move(values)));
        }
    } else {
        // 2D: square blocks, blank-line separated
        std::vector<std::vector<double>> block;
        std::size_t block_start_line = 0;
        auto flush_block = [&]() {
            if (block.empty()) return;
            const std::size_t rows = block.size();
            const std::size_t cols = block.front().size();
            if (rows != cols)
                throw ParseError("non-square 2D block: " + std::to_string(rows) + " rows x " +
                                     std::to_string(cols) + " columns",
                                 block_start_line);
            if (!is_power_of_two(rows))
                throw ParseError("non-radix-2 block size " + std::to_string(rows),
                                 block_start_line);
            std::vector<double> flat;
            flat.reserve(rows * cols);
            for (const auto& r : block) flat.insert(flat.end(), r.begin(), r.end());
            Signal s = Signal::matrix(rows, std::move(flat));
            if (!out.signals.empty() && !s.same_shape(out.signals.front()))
                throw ParseError("block shape differs from previous blocks", block_start_line);
            out.signals.push_back(std::move(s));
            block.clear();
        };
        for (const Line& l : lines) {
            if (l.text.empty()) {
                flush_block();
                continue;
            }
            std::vector<double> values = parse_fields(l);
            if (!block.empty() && values.size() != block.front().size())
                throw ParseError("ragged rows: expected " + std::to_string(block.front().size()) +
                                     " values, got " + std::to_string(values.size()),
                                 l.number);
            if (block.empty()) block_start_line = l.number;
            block.push_back(std::move(values));
        }
        flush_block();
    }

    if (out.signals.empty()) throw ParseError("no signals in " + path);
    return out;
}

void write_csv(const Dataset& dataset, const std::string& path) {
    for (const Signal& s : dataset.signals)
        if (!s.same_shape(dataset.signals.front()))
            throw ShapeError("dataset signals must share one shape");

    std::ofstream outstream(path, std::ios::binary);
    if (!outstream) throw IoError("cannot write " + path);

    for (const Signal& s : dataset.signals) {
        if (s.dim == 1) {
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (i) outstream << ',';
                outstream << format_double(s.values[i]);
            }
            outstream << '\n';
        } else {
            for (std::size_t r = 0; r < s.extent; ++r) {
                for (std::size_t c = 0; c < s.extent; ++c) {
                    if (c) outstream << ',';
                    outstream << format_double(s.at(r, c));
                }
                outstream << '\n';
            }
            outstream << '\n'; // block terminator
        }
    }
    if (!outstream) throw IoError("write failed for " + path);
}

void save_filter(const FilterBank& fb, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << fb.size() << '\n';
    const std::vector<double>& a = fb.lowpass();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) out << ' ';
        out << format_double_17(a[i]);
    }
    out << '\n';
    if (!out) throw IoError("write failed for " + path);
}

FilterBank load_filter(const std::string& path) {
    const std::string content = read_file(path);
    const char* ptr = content.data();
    const char* end = ptr + content.size();
    auto offset = [&]() { return static_cast<std::size_t>(ptr - content.data()); };
    auto skip_ws = [&]() {
        while (ptr < end && (*ptr == ' ' || *ptr == '\t' || *ptr == '\n' || *ptr == '\r')) ++ptr;
    };

    skip_ws();
    std::size_t count = 0;
    auto res = std::from_chars(ptr, end, count);
    if (res.ec != std::errc{})
        throw ParseError("filter file: cannot read tap count", 1, offset());
    ptr = res.ptr;
    if (count == 0 || count % 2 != 0)
        throw ParseError("filter file: tap count must be even and positive, got " +
                             std::to_string(count),
                         1);

    std::vector<double> taps;
    taps.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        skip_ws();
        if (ptr >= end)
            throw ParseError("filter file: truncated, expected " + std::to_string(count) +
                                 " taps, got " + std::to_string(i),
                             2, offset());
        double v = 0.0;
        res = std::from_chars(ptr, end, v);
        if (res.ec != std::errc{})
            throw ParseError("filter file: bad tap value", 2, offset());
        ptr = res.ptr;
        taps.push_back(v);
    }
    skip_ws();
    if (ptr != end) throw ParseError("filter file: trailing content", 2, offset());
    return FilterBank(std::move(taps));
}

} // namespace wavelearn
