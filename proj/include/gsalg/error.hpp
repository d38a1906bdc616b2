#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gsalg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed relation text or JSON input. Carries a 1-based position when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : Error(format(what, line, column)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& what, std::size_t line, std::size_t column) {
        if (line == 0) return what;
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
    }

    std::size_t line_;
    std::size_t column_;
};

/// Operands live in different graded pieces or over different fields.
class DegreeMismatch : public Error {
public:
    using Error::Error;
};

/// A degree, precision or memory limit would be exceeded.
class CapExceeded : public Error {
public:
    using Error::Error;
};

/// A magnitude comparison could not be separated within the refinement budget.
class Undecided : public Error {
public:
    using Error::Error;
};

/// Structural data (a ladder, a schedule) violates a required property.
class PropertyViolation : public Error {
public:
    using Error::Error;
};

/// Invalid argument to an operation (bad search parameters, n < 2, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace gsalg
