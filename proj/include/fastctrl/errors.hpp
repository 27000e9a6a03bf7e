#pragma once

#include <stdexcept>
#include <string>

namespace fastctrl {

// Structural hypotheses of a spectral system are violated (gap, monotonicity,
// sign pattern).
struct GapViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct UnknownIndex : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct QuadratureNotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SeriesNotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Stored modes cannot certify the requested product accuracy.
struct TruncationError : std::runtime_error {
    long required_modes;
    TruncationError(const std::string& what, long required)
        : std::runtime_error(what), required_modes(required) {}
};

// Working precision is too low for the conditioning of the linear system.
struct PrecisionInsufficient : std::runtime_error {
    double condition_estimate;
    PrecisionInsufficient(const std::string& what, double cond)
        : std::runtime_error(what), condition_estimate(cond) {}
};

// Quadratic-decay certificate for a frequency tail could not be established.
struct TailNotBounded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A normalizing denominator underflowed at the working precision.
struct DivisionDegenerate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fastctrl
