#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crowdctl {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A distribution puts mass where the reference distribution has none, so the
/// KL divergence is infinite.
class AbsoluteContinuityError : public Error {
public:
    using Error::Error;
};

/// Every probability of a row is zero.
class EmptySupportError : public Error {
public:
    using Error::Error;
};

/// A propagated marginal lost or gained more than 1e-9 of mass.
class NumericalDriftError : public Error {
public:
    using Error::Error;
};

class InstanceTooLargeError : public Error {
public:
    using Error::Error;
};

class InfeasibleRouteError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed scenario document. `line`/`column` are 1-based positions in the
/// source text when known (0 otherwise); `field` is a JSON path such as
/// `target[2][0]`.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::string field, std::size_t line = 0,
               std::size_t column = 0)
        : Error(format(message, field, line, column)),
          field_(std::move(field)),
          line_(line),
          column_(column) {}

    const std::string& field() const noexcept { return field_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& message, const std::string& field,
                              std::size_t line, std::size_t column) {
        std::string out = "parse error";
        if (line > 0) out += " at line " + std::to_string(line) + ", column " + std::to_string(column);
        if (!field.empty()) out += " in field '" + field + "'";
        return out + ": " + message;
    }

    std::string field_;
    std::size_t line_;
    std::size_t column_;
};

class SchemaVersionError : public Error {
public:
    using Error::Error;
};

} // namespace crowdctl
