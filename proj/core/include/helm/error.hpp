#pragma once

#include <stdexcept>
#include <string>

namespace helm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument values or an operation called in the wrong state.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Matrix shapes that do not chain.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// NaN/Inf in inputs, or a solve that produced non-finite output.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// File system and (de)serialization failures.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed CSV or JSON content. Row and column are 1-based, 0 when unknown.
class ParseError : public IoError {
public:
    ParseError(const std::string& what, std::size_t row, std::size_t column)
        : IoError(what), row_(row), column_(column) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

}  // namespace helm
