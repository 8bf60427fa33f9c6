#include "qdiff/tridiag.hpp"

#include <cmath>
#include <stdexcept>

#include "qdiff/errors.hpp"

namespace qdiff {

void PeriodicTridiagonal::multiply(std::span<const double> x,
                                   std::span<double> y) const {
    const int n = size();
    for (int i = 0; i < n; ++i) {
        const double xm = x[(i + n - 1) % n];
        const double xp = x[(i + 1) % n];
        y[i] = sub[i] * xm + diag[i] * x[i] + super[i] * xp;
    }
}

PeriodicTridiagonal PeriodicTridiagonal::transposed() const {
    const int n = size();
    PeriodicTridiagonal t;
    t.sub.resize(n);
    t.diag = diag;
    t.super.resize(n);
    t.dx = dx;
    t.m_structure = m_structure;
    t.max_peclet = max_peclet;
    for (int i = 0; i < n; ++i) {
        t.sub[i] = super[(i + n - 1) % n];
        t.super[i] = sub[(i + 1) % n];
    }
    return t;
}

CyclicFactor::CyclicFactor(std::span<const double> sub,
                           std::span<const double> diag,
                           std::span<const double> super) {
    const int n = static_cast<int>(diag.size());
    if (n < 3) throw DomainError("cyclic tridiagonal solve needs n >= 3");
    const double alpha = sub[0];       // entry (0, n-1)
    const double beta = super[n - 1];  // entry (n-1, 0)

    // Sherman-Morrison split: A = A' + u v^T with u = (gamma, 0, ..., beta),
    // v = (1, 0, ..., alpha/gamma); A' is plainly tridiagonal.
    const double gamma = -diag[0];
    alpha_over_gamma_ = alpha / gamma;

    std::vector<double> d(diag.begin(), diag.end());
    d[0] = diag[0] - gamma;
    d[n - 1] = diag[n - 1] - alpha * beta / gamma;

    sub_.assign(sub.begin(), sub.end());
    sub_[0] = 0.0;
    std::vector<double> e(super.begin(), super.end());
    e[n - 1] = 0.0;

    c_.resize(n);
    inv_beta_.resize(n);
    double piv = d[0];
    if (piv == 0.0) throw ConvergenceError("tridiagonal solve: zero pivot");
    inv_beta_[0] = 1.0 / piv;
    c_[0] = e[0] * inv_beta_[0];
    for (int i = 1; i < n; ++i) {
        piv = d[i] - sub_[i] * c_[i - 1];
        if (piv == 0.0)
            throw ConvergenceError("tridiagonal solve: zero pivot");
        inv_beta_[i] = 1.0 / piv;
        c_[i] = e[i] * inv_beta_[i];
    }

    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = beta;
    z_.resize(n);
    work_.resize(n);
    solve(u, z_);  // one_plus_vz_ still 0; fix up afterwards
    one_plus_vz_ = 1.0 + z_[0] + alpha_over_gamma_ * z_[n - 1];
}

void CyclicFactor::solve(std::span<const double> rhs,
                         std::span<double> x) const {
    const int n = size();
    std::vector<double>& d = work_;
    d[0] = rhs[0] * inv_beta_[0];
    for (int i = 1; i < n; ++i)
        d[i] = (rhs[i] - sub_[i] * d[i - 1]) * inv_beta_[i];
    x[n - 1] = d[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = d[i] - c_[i] * x[i + 1];

    if (one_plus_vz_ != 0.0) {
        const double vx = x[0] + alpha_over_gamma_ * x[n - 1];
        const double factor = vx / one_plus_vz_;
        for (int i = 0; i < n; ++i) x[i] -= factor * z_[i];
    }
}

std::vector<double> solve_cyclic_tridiagonal(std::span<const double> sub,
                                             std::span<const double> diag,
                                             std::span<const double> super,
                                             std::span<const double> rhs) {
    CyclicFactor f(sub, diag, super);
    std::vector<double> x(diag.size());
    f.solve(rhs, x);
    return x;
}

}  // namespace qdiff
