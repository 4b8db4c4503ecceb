#pragma once

#include <stdexcept>
#include <string>

namespace hsflow {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A symmetric factorization hit a non-positive pivot: the matrix (or a
// field of matrices) is not positive definite where it has to be.
struct NotPositiveDefinite : Error {
    using Error::Error;
};

// Fields living on different grids were combined.
struct GridMismatch : Error {
    using Error::Error;
};

// An algebraic precondition (trace constraint, symmetry, det-1, ...) failed.
struct ConstraintViolated : Error {
    using Error::Error;
};

// The constant 2-form parts of a triple are linearly dependent, so the
// triple cannot be brought to normal form.
struct NotAFrame : Error {
    using Error::Error;
};

// Time stepping produced non-finite values.
struct UnstableStep : Error {
    UnstableStep(const std::string& msg, double t_fail) : Error(msg), t(t_fail) {}
    double t;
};

// A map that must be strictly increasing is not.
struct NonMonotone : Error {
    using Error::Error;
};

// Bad key/value in a run configuration file.
struct ConfigError : Error {
    ConfigError(const std::string& msg, int line_no) : Error(msg), line(line_no) {}
    int line;
};

}  // namespace hsflow
