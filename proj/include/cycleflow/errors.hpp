#pragma once

#include <stdexcept>
#include <string>

namespace cycleflow {

/// Base class for all cycleflow errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (case files, JSON, schedule files).
/// Carries a 1-based source line number when one is known.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg, int line = -1)
        : Error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Structurally invalid input: disconnected grid, schema violation,
/// unsupported branch, bad arguments.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: non-SPD factorization, rank-deficient basis,
/// method disagreement.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace cycleflow
