#include "qdiff/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "field_impl.hpp"

namespace qdiff {

CoefficientProblem coefficient_problem(const PeriodicField& r,
                                       const PeriodicField& D, double q,
                                       double lambda) {
    CoefficientProblem p;
    p.period = D.period();
    const PeriodicField D1 = D.derivative(1);
    const PeriodicField D2 = D.derivative(2);
    p.diffusion = [D](double x) { return D(x); };
    p.drift = [D, D1, q, lambda](double x) {
        return (1.0 + q) * D1(x) - 2.0 * lambda * D(x);
    };
    p.zero_order = [r, D, D1, D2, q, lambda](double x) {
        return q * D2(x) + lambda * lambda * D(x) -
               (1.0 + q) * lambda * D1(x) + r(x);
    };
    return p;
}

PeriodicTridiagonal assemble(const CoefficientProblem& problem, int n) {
    if (n < 3) throw DomainError("assemble: grid too small");
    const double L = problem.period;
    const double dx = L / n;

    PeriodicTridiagonal M;
    M.sub.resize(n);
    M.diag.resize(n);
    M.super.resize(n);
    M.dx = dx;
    M.m_structure = true;
    M.max_peclet = 0.0;

    for (int i = 0; i < n; ++i) {
        const double x = i * dx;
        const double a = problem.diffusion(x);
        const double b = problem.drift(x);
        const double c = problem.zero_order(x);
        if (!(a > 0.0))
            throw DomainError("assemble: nonpositive diffusion on grid");
        M.sub[i] = a / (dx * dx) - b / (2.0 * dx);
        M.super[i] = a / (dx * dx) + b / (2.0 * dx);
        M.diag[i] = c - 2.0 * a / (dx * dx);
        M.max_peclet =
            std::max(M.max_peclet, std::abs(b) * dx / (2.0 * a));
        if (M.sub[i] < 0.0 || M.super[i] < 0.0) M.m_structure = false;
    }
    return M;
}

PeriodicTridiagonal assemble(const OperatorSpec& spec) {
    if (spec.n < 32) throw DomainError("OperatorSpec: n must be >= 32");
    return assemble(
        coefficient_problem(spec.r, spec.D, spec.q, spec.lambda), spec.n);
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double max_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

// Shifted inverse power iteration: with sigma = 1 + max row sum, sigma I - M
// is a strictly diagonally dominant M-matrix (given the M-structure), so its
// inverse is nonnegative and shares the Perron eigenvector of M. Each sweep
// is one O(n) cyclic tridiagonal solve; the convergence rate is set by the
// operator's spectral gap, independent of the grid resolution.
EigenResult principal_eigenpair(const PeriodicTridiagonal& M,
                                const std::vector<double>* start,
                                long max_iterations) {
    const int n = M.size();
    double sigma = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) sigma = std::max(sigma, M.row_sum(i));
    sigma += 1.0;

    std::vector<double> ssub(n), sdiag(n), ssuper(n);
    for (int i = 0; i < n; ++i) {
        ssub[i] = -M.sub[i];
        sdiag[i] = sigma - M.diag[i];
        ssuper[i] = -M.super[i];
    }
    const CyclicFactor factor(ssub, sdiag, ssuper);

    std::vector<double> v;
    if (start && static_cast<int>(start->size()) == n && max_norm(*start) > 0)
        v = *start;
    else
        v.assign(n, 1.0);

    // Roundoff in M*v scales with the matrix magnitude (O(n^2) entries), so
    // the residual test needs a matching floor.
    double mat_norm = 0.0;
    for (int i = 0; i < n; ++i)
        mat_norm = std::max(mat_norm, std::abs(M.sub[i]) + std::abs(M.diag[i]) +
                                          std::abs(M.super[i]));
    const double resid_floor =
        16.0 * std::numeric_limits<double>::epsilon() * mat_norm;
    // The Rayleigh quotient inherits averaged roundoff from M*v, so its
    // iterate-to-iterate jitter never drops below this scale.
    const double dk_floor =
        8.0 * std::numeric_limits<double>::epsilon() * mat_norm /
        std::sqrt(static_cast<double>(n));

    std::vector<double> y(n);
    double k_prev = std::numeric_limits<double>::quiet_NaN();
    double k2 = 0, k1 = 0;  // last two raw Rayleigh estimates (for Aitken)
    int have = 0;
    EigenResult out;
    out.n_used = n;

    std::vector<double> next(n);
    for (long it = 1; it <= max_iterations; ++it) {
        factor.solve(v, next);
        v.swap(next);
        const double scale = max_norm(v);
        if (!(scale > 0.0) || !std::isfinite(scale))
            throw ConvergenceError("eigensolver: iterate degenerated");
        for (double& x : v) x /= scale;

        M.multiply(v, y);
        const double k_raw = dot(v, y) / dot(v, v);

        // Aitken acceleration of the eigenvalue sequence
        double k_est = k_raw;
        if (have >= 2) {
            const double d1 = k1 - k2, d2 = k_raw - k1;
            const double denom = d2 - d1;
            if (std::abs(denom) > 1e-30)
                k_est = k_raw - d2 * d2 / denom;
        }
        k2 = k1;
        k1 = k_raw;
        ++have;

        double resid = 0.0;
        for (int i = 0; i < n; ++i)
            resid = std::max(resid, std::abs(y[i] - k_est * v[i]));

        const double scale_k = 1.0 + std::abs(k_est);
        if (std::isfinite(k_prev) &&
            std::abs(k_est - k_prev) < std::max(1e-12 * scale_k, dk_floor) &&
            resid <= std::max(1e-9 * scale_k, resid_floor)) {
            out.k = k_est;
            out.residual = resid;
            out.iterations = static_cast<int>(it);
            break;
        }
        k_prev = k_est;
        if (it == max_iterations)
            throw ConvergenceError(
                "eigensolver: no convergence within iteration budget");
    }

    for (double x : v)
        if (!(x > 0.0))
            throw ConvergenceError(
                "eigensolver: eigenfunction lost positivity (refine grid)");
    out.phi = std::move(v);
    return out;
}

namespace {

std::vector<double> upsample(const std::vector<double>& coarse) {
    const int m = static_cast<int>(coarse.size());
    std::vector<double> fine(2 * m);
    for (int i = 0; i < m; ++i) {
        fine[2 * i] = coarse[i];
        fine[2 * i + 1] = 0.5 * (coarse[i] + coarse[(i + 1) % m]);
    }
    return fine;
}

}  // namespace

KValueResult principal_k(const CoefficientProblem& problem, double tol,
                         int n0, int n_max, EigenWorkspace* ws) {
    if (!(tol > 0.0)) throw DomainError("principal_k: tol must be positive");

    bool have_prev = false;
    double k_prev = 0.0;
    double last_peclet = 0.0;
    bool last_structure_ok = false;

    for (int n = n0; n <= n_max; n *= 2) {
        PeriodicTridiagonal M = assemble(problem, n);
        last_peclet = M.max_peclet;
        last_structure_ok = M.m_structure;
        if (!M.m_structure) {
            have_prev = false;  // Richardson pair must share the scheme
            continue;
        }

        const std::vector<double>* start = nullptr;
        std::vector<double> up;
        if (ws) {
            if (auto it = ws->start.find(n); it != ws->start.end()) {
                start = &it->second;
            } else if (auto c = ws->start.find(n / 2); c != ws->start.end()) {
                up = upsample(c->second);
                start = &up;
            }
        }
        EigenResult res = principal_eigenpair(M, start);
        if (ws) ws->start[n] = res.phi;

        if (have_prev) {
            // Below eps * ||M|| the increments are eigensolver roundoff, not
            // discretization error; doubling further only amplifies the
            // noise, so accept the extrapolated value there as well.
            double mat_norm = 0.0;
            for (int i = 0; i < M.size(); ++i)
                mat_norm = std::max(mat_norm,
                                    std::abs(M.sub[i]) + std::abs(M.diag[i]) +
                                        std::abs(M.super[i]));
            const double noise_floor =
                4.0 * std::numeric_limits<double>::epsilon() * mat_norm;
            const double incr = (res.k - k_prev) / 3.0;
            if (std::abs(incr) < std::max(tol, noise_floor))
                return {res.k + incr, n};
        }
        k_prev = res.k;
        have_prev = true;
    }

    if (!last_structure_ok)
        throw PecletError(
            "principal_k: Peclet condition still violated at n_max "
            "(cell Peclet " + detail::fmt_num(last_peclet) + ")",
            last_peclet, n_max);
    // Tolerance not formally met at the cap; best value we have.
    return {k_prev, n_max};
}

KValueResult k_value(const PeriodicField& r, const PeriodicField& D, double q,
                     double lambda, double tol, EigenWorkspace* ws) {
    require_positive(D);
    return principal_k(coefficient_problem(r, D, q, lambda), tol, 512, 65536,
                       ws);
}

}  // namespace qdiff
