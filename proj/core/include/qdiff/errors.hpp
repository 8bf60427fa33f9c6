#pragma once

#include <stdexcept>
#include <string>

namespace qdiff {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input (bad field definition, bad option, bad config).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed to converge within its budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Grid refinement hit its cap while the cell Peclet condition was still
/// violated. Carries the offending Peclet number for diagnostics.
class PecletError : public ConvergenceError {
public:
    PecletError(const std::string& msg, double peclet, int n)
        : ConvergenceError(msg), peclet_(peclet), n_(n) {}
    double peclet() const { return peclet_; }
    int grid_size() const { return n_; }

private:
    double peclet_;
    int n_;
};

}  // namespace qdiff
