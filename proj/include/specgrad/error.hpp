#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace specgrad {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Violated precondition or malformed input (bad grid, mismatched shapes, bad config).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Syntax error in an expression. `offset()` is the byte offset of the offending token.
class ParseError : public UsageError {
public:
    ParseError(const std::string& message, std::size_t offset, std::string expected)
        : UsageError(message + " at offset " + std::to_string(offset) +
                     (expected.empty() ? std::string{} : " (expected " + expected + ")")),
          offset_(offset),
          expected_(std::move(expected)) {}

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }
    [[nodiscard]] const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

/// Numeric failure: pole, invalid branch, non-finite result.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An intermediate magnitude exceeded the overflow cutoff during evaluation.
class OverflowError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A spectral multiplier is too large to apply meaningfully on the given grid.
class AmplificationError : public DomainError {
public:
    AmplificationError(const std::string& message, double max_magnitude, std::vector<double> argmax_k)
        : DomainError(message), max_magnitude_(max_magnitude), argmax_k_(std::move(argmax_k)) {}

    [[nodiscard]] double max_magnitude() const noexcept { return max_magnitude_; }
    [[nodiscard]] const std::vector<double>& argmax_k() const noexcept { return argmax_k_; }

private:
    double max_magnitude_;
    std::vector<double> argmax_k_;
};

}  // namespace specgrad
