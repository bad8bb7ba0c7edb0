#pragma once

#include <stdexcept>
#include <string>

namespace anchorplan {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad argument or violated precondition.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed profile file content.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Ray refracts horizontal before reaching the requested depth.
class TurningRayError : public Error {
public:
    using Error::Error;
};

/// Requested horizontal range exceeds what any launch angle can reach.
class UnreachableError : public Error {
public:
    using Error::Error;
};

/// Elevation angle outside the cone where the per-layer variance terms
/// are defined (some layer denominator would be non-positive).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Same condition as DomainError, raised by the approximate LOS
/// variance where the elevation-for-grazing substitution breaks down.
class ApproximationInvalidError : public Error {
public:
    using Error::Error;
};

/// Node layout yields a (near-)singular information matrix.
class SingularGeometryError : public Error {
public:
    using Error::Error;
};

/// Fewer than three usable measurements at the current depth.
class InsufficientNodesError : public Error {
public:
    using Error::Error;
};

/// A measured path length that no launch angle can produce at the
/// candidate depth (shorter than the plumb line, or beyond turning).
class UninvertibleMeasurementError : public Error {
public:
    using Error::Error;
};

/// Iterative solver exhausted its iteration budget.
class NonConvergenceError : public Error {
public:
    using Error::Error;
};

/// Reference-position error large enough to cancel the ranging variance.
class NonPositiveVarianceError : public Error {
public:
    using Error::Error;
};

/// An internal cross-check failed; indicates a defect, not bad input.
class InvariantViolationError : public Error {
public:
    using Error::Error;
};

}  // namespace anchorplan
