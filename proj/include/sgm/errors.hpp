#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sgm {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PresentationError : public Error {
public:
    using Error::Error;
};

/// An element was used with a group it does not belong to.
class OwnershipError : public Error {
public:
    using Error::Error;
};

class DegreeError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class UnsupportedProductError : public Error {
public:
    using Error::Error;
};

/// A predicate was asked about a manifold outside its hypotheses.
class InapplicableError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message), line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace sgm
