#pragma once

#include <stdexcept>
#include <string>

namespace unitroot {

/// Base for all library-specific failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Series cannot be fitted: Q = sum x_{t-1}^2 is zero.
struct DegenerateSeriesError : Error {
    using Error::Error;
};

/// The AR(1) recursion fits the data exactly (SSE = 0); the residual
/// variance is undefined and every likelihood-based test is ill-posed.
struct PerfectFitError : Error {
    using Error::Error;
};

/// A quadrature or root-finding routine failed to converge.
struct NumericFailure : Error {
    using Error::Error;
};

/// CSV / input parsing problem; message names row and column.
struct ParseError : Error {
    using Error::Error;
};

/// Remote retrieval problem (transport or HTTP status).
struct FetchError : Error {
    using Error::Error;
};

/// Laplace expansion point sits on the prior support boundary.
struct BoundaryModeError : Error {
    using Error::Error;
};

}  // namespace unitroot
