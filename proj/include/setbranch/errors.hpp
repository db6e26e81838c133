#ifndef SETBRANCH_ERRORS_HPP
#define SETBRANCH_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace setbranch {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid problem structure (bad scope, bad tuple, empty domain, ...).
class ModelError : public Error {
public:
    using Error::Error;
};

// Arithmetic failure while evaluating an intensional expression.
class EvalError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace setbranch

#endif
