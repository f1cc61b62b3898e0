#pragma once

#include <stdexcept>
#include <string>

namespace viewplan {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidDimensionError : Error {
    using Error::Error;
};

struct IndexOutOfRangeError : Error {
    using Error::Error;
};

struct SingularParameterError : Error {
    using Error::Error;
};

struct InvalidBoundsError : Error {
    using Error::Error;
};

struct InsufficientRowsError : Error {
    using Error::Error;
};

struct RankDeficientError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

/// Parse failure in a structured input file; carries the 1-based line number.
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_number(line) {}
    std::size_t line_number;
};

}  // namespace viewplan
