#pragma once

#include <stdexcept>
#include <string>

namespace frugal {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user-supplied configuration (CLI exit code 1).
struct ConfigError : Error {
    using Error::Error;
};

// Malformed value in an input file; message names the line.
struct ParseError : Error {
    using Error::Error;
};

// Structurally wrong input file (column counts, missing fields).
struct SchemaError : Error {
    using Error::Error;
};

// Operation applied to an object in the wrong state.
struct StateError : Error {
    using Error::Error;
};

// Dimension mismatch between model and query.
struct ShapeError : Error {
    using Error::Error;
};

// Value outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

// Linear algebra failure (non-finite input, non-PD matrix).
struct NumericError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace frugal
