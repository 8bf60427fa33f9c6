#pragma once

#include <span>
#include <vector>

namespace qdiff {

/// Cyclic tridiagonal matrix on a uniform periodic grid. Row i couples to
/// x_{i-1} (sub[i]), x_i (diag[i]) and x_{i+1} (super[i]), indices mod n;
/// sub[0] and super[n-1] are the corner entries (0,n-1) and (n-1,0).
struct PeriodicTridiagonal {
    std::vector<double> sub, diag, super;
    double dx = 0.0;
    bool m_structure = false;   // true iff all off-diagonal entries >= 0
    double max_peclet = 0.0;    // max_i |b_i| dx / (2 a_i)

    int size() const { return static_cast<int>(diag.size()); }

    void multiply(std::span<const double> x, std::span<double> y) const;
    double row_sum(int i) const { return sub[i] + diag[i] + super[i]; }
    PeriodicTridiagonal transposed() const;
};

/// One-time Thomas factorization of a cyclic tridiagonal matrix with a
/// Sherman-Morrison corner correction, for repeated solves against the same
/// matrix (inverse iteration does thousands). No pivoting; intended for
/// diagonally dominant systems.
class CyclicFactor {
public:
    CyclicFactor(std::span<const double> sub, std::span<const double> diag,
                 std::span<const double> super);

    /// Solves A x = rhs; no allocation beyond the internal scratch buffer.
    void solve(std::span<const double> rhs, std::span<double> x) const;

    int size() const { return static_cast<int>(c_.size()); }

private:
    std::vector<double> sub_, c_, inv_beta_;  // elimination data
    std::vector<double> z_;                   // solve against the corner column
    double alpha_over_gamma_ = 0.0;
    double one_plus_vz_ = 0.0;
    mutable std::vector<double> work_;
};

/// Convenience single-shot solve via CyclicFactor.
std::vector<double> solve_cyclic_tridiagonal(std::span<const double> sub,
                                             std::span<const double> diag,
                                             std::span<const double> super,
                                             std::span<const double> rhs);

}  // namespace qdiff
