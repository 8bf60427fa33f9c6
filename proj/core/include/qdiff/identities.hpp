#pragma once

#include <string>
#include <vector>

#include "qdiff/eigen.hpp"
#include "qdiff/field.hpp"

namespace qdiff {

/// The growth-rate penalty -(q/2) D'' + (q^2/4) (D')^2 / D that turns the
/// q-diffusion problem into a Fickian one with growth r - h_q.
PeriodicField hq_correction(const PeriodicField& D, double q);

struct ReductionCheck {
    double lhs = 0.0;   // k_q^lambda[r; D]
    double rhs = 0.0;   // k_0^lambda[r - h_q; D]
    double gap = 0.0;
};

ReductionCheck check_fickian_reduction(const PeriodicField& r,
                                       const PeriodicField& D, double q,
                                       double lambda, double tol = 1e-8);

/// The problem after the space deformation y = h(x), h(x) = int_0^x 1/sqrt(D):
/// unit diffusion with drift data P = ln D o h^{-1} and growth R = r o h^{-1},
/// both new_period-periodic.
struct DeformedProblem {
    std::vector<double> h;          // h(x_j) on a uniform x grid
    std::vector<double> x_nodes;
    double new_period = 0.0;        // h(L)
    PeriodicField R;
    PeriodicField P;

    double s_q(double q) const { return 0.5 - q; }
};

DeformedProblem deform(const PeriodicField& D, const PeriodicField& r,
                       int nodes = 8192);

/// Principal eigenvalue of the deformed operator
///   Phi'' - d/dy[(2 mu + s_q P') Phi] + (R + mu s_q P' + mu^2) Phi,
/// assembled in expanded advection + zero-order form.
double deformed_eigenvalue(const DeformedProblem& problem, double q, double mu,
                           double tol = 1e-8, EigenWorkspace* ws = nullptr);

/// Value of the variational functional
///   -int D |(D^{q/2} phi)'|^2 + int r phi^2   with int phi^2 = 1,
/// a lower bound of the persistence eigenvalue for any positive trial phi.
double rayleigh_value(const PeriodicField& r, const PeriodicField& D, double q,
                      const PeriodicField& trial);

/// Same functional for a trial given on the grid (e.g. a computed
/// eigenfunction); derivatives by 4th-order periodic stencils.
double rayleigh_value_sampled(const PeriodicField& r, const PeriodicField& D,
                              double q, const std::vector<double>& trial);

/// lim_{B->inf} k_q^0[r; B D] = int r D^{-q} / int D^{-q}, by quadrature.
double large_B_limit(const PeriodicField& r, const PeriodicField& D, double q);

/// One row of the `verify` identity table.
struct IdentityCheck {
    std::string identity;
    std::string case_name;
    double gap = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerifyOptions {
    double eig_tol = 1e-8;
    unsigned long long seed = 20240901ULL;  // for the random trial fields
    int workers = 1;
};

/// Runs the full identity suite: the Fickian reduction grid, the deformation
/// grid, variational maximality, the harmonic-mean bounds, the large-B limit,
/// the q -> +/-inf limits and the two growth-rate constructions.
std::vector<IdentityCheck> run_verify(const VerifyOptions& options = {});

}  // namespace qdiff
