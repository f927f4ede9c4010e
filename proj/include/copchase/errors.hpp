#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace copchase {

/// Input that violates a structural or probabilistic constraint. The CLI maps
/// every ValidationError (and subclass) to exit code 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyInstanceError : public ValidationError {
public:
    EmptyInstanceError() : ValidationError("instance has no vertices") {}
};

/// Syntax error in an instance document. Line and column are 1-based.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : ValidationError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Oracle enumeration would exceed its cap. `count` is nullopt when the
/// product of neighborhood sizes overflows 64 bits.
class InstanceTooLargeError : public std::runtime_error {
public:
    InstanceTooLargeError(std::optional<std::uint64_t> count, double log10_count, std::uint64_t cap)
        : std::runtime_error(message(count, log10_count, cap)), count_(count), log10_count_(log10_count), cap_(cap) {}

    std::optional<std::uint64_t> count() const noexcept { return count_; }
    double log10_count() const noexcept { return log10_count_; }
    std::uint64_t cap() const noexcept { return cap_; }

private:
    static std::string message(std::optional<std::uint64_t> count, double log10_count, std::uint64_t cap);

    std::optional<std::uint64_t> count_;
    double log10_count_;
    std::uint64_t cap_;
};

/// The simulator only samples full distributions.
class UnsupportedSimulationInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A solver produced output that breaks one of its own guarantees.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace copchase
