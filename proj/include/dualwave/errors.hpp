#pragma once

#include <stdexcept>
#include <string>

namespace dualwave {

// Root of every error the library raises. Numerical failures derive from
// NumericalError so the CLI can map them to a single exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input outside an operation's mathematical domain (n0 <= 0, E <= 1, k <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

// Bracketed root search gave up. Carries the last bracket it held.
class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, double lo, double hi)
        : NumericalError(what), lo_(lo), hi_(hi) {}

    double bracket_lo() const noexcept { return lo_; }
    double bracket_hi() const noexcept { return hi_; }

private:
    double lo_;
    double hi_;
};

// Evaluation at (or within the masking radius of) a point source.
class SingularityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// |Psi|^2 below the node threshold; the Bohmian velocity is undefined there.
class NodeStagnation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Integration step too coarse for the fast k2 oscillation.
class StepSizeError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Grid too coarse for a finite-difference stencil.
class ResolutionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InsufficientDataError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Spectrum has no non-DC content (flat signal).
class NoPeakError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace dualwave
