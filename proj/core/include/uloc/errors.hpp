// Error types thrown by the uloc library.
#pragma once

#include <stdexcept>
#include <string>

namespace uloc {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Two functions live on different grids (or domains) where they must match.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

/// An operation received a function tagged with the wrong domain.
class DomainTagError : public Error {
public:
    using Error::Error;
};

/// Requested object does not fit inside the grid box (support or order overflow).
class TruncationError : public Error {
public:
    using Error::Error;
};

/// Input was required to be unit-norm but is not.
class UnnormalizedError : public Error {
public:
    using Error::Error;
};

/// A system failed its orthonormality check.
class NotOrthonormalError : public Error {
public:
    using Error::Error;
};

/// A dense-matrix or member budget was exceeded.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// Supports that must be disjoint overlap.
class SupportCollisionError : public Error {
public:
    using Error::Error;
};

/// A completion block was requested at a scale violating the admission rule.
class AdmissionRuleError : public Error {
public:
    using Error::Error;
};

/// Grid too coarse for the requested construction.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Constraint geometry leaves no feasible solution.
class InfeasibleGeometryError : public Error {
public:
    using Error::Error;
};

} // namespace uloc
