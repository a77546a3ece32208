#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace schauder {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or non-finite input data.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A numeric parameter outside its admissible range (alpha, delta, k, ...).
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// Smallest singular value below the working-precision threshold.
class SingularMatrix : public Error {
public:
    using Error::Error;
};

class InvalidPermutation : public Error {
public:
    using Error::Error;
};

class InvalidIndex : public Error {
public:
    using Error::Error;
};

/// A spectrum sample too sparse to fill a selection window.
class InsufficientCardinality : public Error {
public:
    InsufficientCardinality(std::string message, std::size_t level, std::size_t exponent)
        : Error(std::move(message)), level_(level), exponent_(exponent) {}

    /// 1-based level k whose windows could not be filled.
    std::size_t level() const noexcept { return level_; }
    /// Exponent j of the first failing window [t0 a^j / delta, t0 a^j].
    std::size_t exponent() const noexcept { return exponent_; }

private:
    std::size_t level_;
    std::size_t exponent_;
};

/// Failure reading or writing the text formats; carries the offending line.
class IoError : public Error {
public:
    IoError(const std::string& message, std::size_t line = 0)
        : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace schauder
