#pragma once

#include <stdexcept>
#include <string>

namespace mde {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside a documented domain (x <= 0 in a generator, theta outside
// the parameter space, ...).
struct DomainError : Error {
    using Error::Error;
};

// Adaptive integration could not reach the requested tolerance. Carries the
// best available estimate so callers can decide whether to degrade gracefully.
struct IntegrationError : Error {
    double best_estimate;
    IntegrationError(const std::string& msg, double best)
        : Error(msg), best_estimate(best) {}
};

// Optimizer failure that survived restarts, or an estimating equation whose
// residual never came down.
struct EstimationError : Error {
    using Error::Error;
};

// A fit that exists formally but is statistically meaningless (zero scale,
// sample too small to identify the parameters, ...).
struct DegenerateFitError : EstimationError {
    using EstimationError::EstimationError;
};

// Broken input: CSV parse failures, empty samples, rank-deficient designs.
struct DataError : Error {
    using Error::Error;
};

// An internal cross-check failed; indicates a numerical breakdown rather
// than bad user input (eigenvalue count != constraint rank, singular J, ...).
struct ConsistencyError : Error {
    using Error::Error;
};

}  // namespace mde
