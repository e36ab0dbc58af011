#pragma once

#include <stdexcept>
#include <string>

namespace spreadlab {

/// Base class for every library error.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid argument, malformed input file, or violated precondition.
struct ValidationError : Error {
    using Error::Error;
};

struct RankDeficientError : ValidationError {
    using ValidationError::ValidationError;
};

struct SingularError : ValidationError {
    using ValidationError::ValidationError;
};

struct ZeroVectorError : ValidationError {
    using ValidationError::ValidationError;
};

struct NotOrthonormalError : ValidationError {
    using ValidationError::ValidationError;
};

struct DimensionError : ValidationError {
    using ValidationError::ValidationError;
};

struct TooLargeError : ValidationError {
    using ValidationError::ValidationError;
};

struct InapplicableError : ValidationError {
    using ValidationError::ValidationError;
};

struct UnknownTagError : ValidationError {
    using ValidationError::ValidationError;
};

struct NotIntegerShiftError : ValidationError {
    using ValidationError::ValidationError;
};

/// An iterative solver hit its iteration cap above tolerance.
struct NoConvergenceError : Error {
    using Error::Error;
};

/// Closed form and series evaluation disagree beyond tolerance (diagnostic).
struct FormulaMismatchError : Error {
    using Error::Error;
};

}  // namespace spreadlab
