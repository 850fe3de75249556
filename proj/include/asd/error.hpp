#pragma once

#include <stdexcept>
#include <string>

namespace asd {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file. Carries the 1-based line number when known.
struct ParseError : Error {
    ParseError(const std::string& msg, long line_number = 0)
        : Error(line_number > 0 ? "line " + std::to_string(line_number) + ": " + msg : msg),
          line(line_number) {}
    long line;
};

// Invalid experiment plan or command configuration.
struct PlanError : Error {
    using Error::Error;
};

// Evaluation cannot proceed (degenerate data, bad fold setup, ...).
struct EvalError : Error {
    using Error::Error;
};

}  // namespace asd
