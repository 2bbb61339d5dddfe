#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lambdagen {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested size class contains no terms.
struct EmptySizeClass : Error {
    using Error::Error;
};

/// Requested openness level exceeds the table's truncation level.
struct TruncationExceeded : Error {
    using Error::Error;
};

/// Exhaustive enumeration refused: size above the safety guard.
struct SizeGuardExceeded : Error {
    using Error::Error;
};

/// Generating-function evaluation hit or passed the dominant singularity.
struct SingularityExceeded : Error {
    using Error::Error;
};

/// Iterative solver failed to converge within its iteration cap.
struct NoConvergence : Error {
    using Error::Error;
};

/// Calibration target is degenerate (e.g. mean size 0).
struct DegenerateTarget : Error {
    using Error::Error;
};

/// Rejection loop gave up after the configured number of attempts.
struct AttemptsExhausted : Error {
    using Error::Error;
};

/// Tuning targets cannot be met by any weight assignment.
struct Infeasible : Error {
    using Error::Error;
};

/// Type inference was handed an open term.
struct OpenTermRejected : Error {
    using Error::Error;
};

/// Malformed textual input; carries the byte offset of the failure.
struct ParseError : Error {
    std::size_t offset;
    ParseError(const std::string& what, std::size_t at)
        : Error(what + " at offset " + std::to_string(at)), offset(at) {}
};

}  // namespace lambdagen
