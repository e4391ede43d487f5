// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wavelearn {

/// Filter definition is unusable (odd or zero length).
class InvalidFilterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Signal or coefficient array has the wrong shape (non-radix-2, non-square,
/// or mismatched against its counterpart).
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// File-system level failure: missing, unreadable or unwritable path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed file content. Carries the 1-based line number and the byte
/// offset of the offending location when known (0 = unknown).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line = 0, std::size_t byte_offset = 0)
        : std::runtime_error(decorate(message, line, byte_offset)),
          line_(line),
          byte_offset_(byte_offset) {}

    std::size_t line() const { return line_; }
    std::size_t byte_offset() const { return byte_offset_; }

private:
    static std::string decorate(const std::string& message, std::size_t line, std::size_t byte) {
        std::string out = message;
        if (line > 0) out += " (line " + std::to_string(line) + ")";
        if (byte > 0) out += " (byte offset " + std::to_string(byte) + ")";
        return out;
    }

    std::size_t line_;
    std::size_t byte_offset_;
};

/// Sparsity of an all-zero coefficient set is undefined.
class UndefinedSparsityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace wavelearn
