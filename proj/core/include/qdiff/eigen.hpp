#pragma once

#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "qdiff/field.hpp"
#include "qdiff/tridiag.hpp"

namespace qdiff {

/// The discretized operator
///   D psi'' + ((1+q)D' - 2 lambda D) psi'
///     + (q D'' + lambda^2 D - (1+q) lambda D' + r) psi
/// on a uniform periodic grid of n points.
struct OperatorSpec {
    PeriodicField r;
    PeriodicField D;
    double q = 0.0;
    double lambda = 0.0;
    int n = 512;
};

/// Principal eigenpair of a cyclic tridiagonal operator.
struct EigenResult {
    double k = 0.0;                // principal eigenvalue
    std::vector<double> phi;       // positive eigenfunction, max-normalized
    double residual = 0.0;         // inf-norm of M phi - k phi
    int n_used = 0;
    int iterations = 0;
};

/// A periodic second-order problem a(x) psi'' + b(x) psi' + c(x) psi given by
/// coefficient callables; the common discretization path for both the
/// physical operator and its deformed counterpart.
struct CoefficientProblem {
    std::function<double(double)> diffusion;   // a(x) > 0
    std::function<double(double)> drift;       // b(x)
    std::function<double(double)> zero_order;  // c(x)
    double period = 1.0;
};

/// Second-order central differences with periodic wraparound. Coefficients
/// are evaluated at the grid nodes. The M-structure flag records whether all
/// off-diagonal entries are nonnegative (cell Peclet |b| dx / (2a) < 1).
PeriodicTridiagonal assemble(const OperatorSpec& spec);
PeriodicTridiagonal assemble(const CoefficientProblem& problem, int n);

CoefficientProblem coefficient_problem(const PeriodicField& r,
                                       const PeriodicField& D, double q,
                                       double lambda);

/// Eigenvalue of maximal real part with its positive eigenfunction, by
/// shifted inverse power iteration with Aitken-accelerated Rayleigh
/// estimates. Requires the M-structure flag (callers refine otherwise).
EigenResult principal_eigenpair(const PeriodicTridiagonal& M,
                                const std::vector<double>* start = nullptr,
                                long max_iterations = 200000);

/// Reusable start vectors keyed by grid size; warms up repeated eigensolves
/// at nearby parameters (the speed minimization makes many of those).
struct EigenWorkspace {
    std::unordered_map<int, std::vector<double>> start;
};

struct KValueResult {
    double k = 0.0;
    int n_used = 0;
};

/// Grid-doubling driver: solves at n and 2n (starting from n0, skipping
/// grids that violate the Peclet condition), stops when the Richardson
/// increment |k_2n - k_n|/3 drops below tol and returns the extrapolated
/// value k_2n + (k_2n - k_n)/3. Throws PecletError if n_max is hit with the
/// Peclet condition still violated.
KValueResult principal_k(const CoefficientProblem& problem, double tol,
                         int n0 = 512, int n_max = 65536,
                         EigenWorkspace* ws = nullptr);

/// k_q^lambda[r; D], the principal eigenvalue of the periodic operator.
KValueResult k_value(const PeriodicField& r, const PeriodicField& D, double q,
                     double lambda, double tol, EigenWorkspace* ws = nullptr);

}  // namespace qdiff
