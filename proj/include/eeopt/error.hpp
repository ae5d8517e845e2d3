#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace eeopt {

/// Short human-readable form of a number for error messages.
inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    DomainError(const std::string& what, double value)
        : Error(what + " (got " + format_number(value) + ")"), value_(value) {}

    double value() const noexcept { return value_; }

private:
    double value_;
};

/// Iterative method hit its iteration cap.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A field violates a type invariant.
class ValidationError : public Error {
public:
    ValidationError(std::string key, std::string value, std::string constraint)
        : Error(key + " = " + value + " violates " + constraint),
          key_(std::move(key)), value_(std::move(value)), constraint_(std::move(constraint)) {}

    const std::string& key() const noexcept { return key_; }
    const std::string& value() const noexcept { return value_; }
    const std::string& constraint() const noexcept { return constraint_; }

private:
    std::string key_;
    std::string value_;
    std::string constraint_;
};

}  // namespace eeopt
