#pragma once

#include <functional>
#include <vector>

#include "qdiff/tridiag.hpp"

namespace oracles {

struct DenseEigen {
    double k = 0.0;                // eigenvalue of maximal real part
    std::vector<double> phi;       // matching right eigenvector, max = 1
};

/// Full-spectrum dense eigensolve (LAPACK dgeev) of the cyclic tridiagonal
/// matrix; independent of the library's iterative path. n <= 2048.
DenseEigen dense_principal_eigen(const qdiff::PeriodicTridiagonal& M);

/// Recursive adaptive Simpson to the requested absolute tolerance.
double adaptive_quadrature(const std::function<double(double)>& f, double a,
                           double b, double tol = 1e-12);

/// Second-derivative knot values of the periodic cubic spline through y,
/// solved by dense Gaussian elimination with partial pivoting.
std::vector<double> dense_periodic_spline_moments(
    const std::vector<double>& y, double period);

}  // namespace oracles
