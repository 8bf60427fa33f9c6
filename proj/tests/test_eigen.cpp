#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qdiff/eigen.hpp"

using namespace qdiff;

namespace {

const PeriodicField kR = PeriodicField::cosine_squared(0.0, 1.0, 0.0);
const PeriodicField kD = PeriodicField::cosine_squared(0.1, 1.0, 0.0);

}  // namespace

TEST_CASE("assemble: constant Laplacian plus identity") {
    OperatorSpec spec{PeriodicField::constant(1.0),
                      PeriodicField::constant(1.0), 0.0, 0.0, 32};
    const auto M = assemble(spec);
    REQUIRE(M.size() == 32);
    const double inv_dd = 32.0 * 32.0;
    for (int i = 0; i < 32; ++i) {
        CHECK(M.diag[i] == doctest::Approx(1.0 - 2.0 * inv_dd).epsilon(1e-14));
        CHECK(M.sub[i] == doctest::Approx(inv_dd).epsilon(1e-14));
        CHECK(M.super[i] == doctest::Approx(inv_dd).epsilon(1e-14));
    }
    CHECK(M.m_structure);
    CHECK(M.max_peclet == 0.0);

    // q only enters through D' and D'', so constant D gives the same matrix.
    spec.q = 7.0;
    const auto M7 = assemble(spec);
    for (int i = 0; i < 32; ++i) {
        CHECK(M7.diag[i] == M.diag[i]);
        CHECK(M7.sub[i] == M.sub[i]);
        CHECK(M7.super[i] == M.super[i]);
    }
}

TEST_CASE("assemble: action on the constant vector is the zero-order term") {
    OperatorSpec spec{kR, kD, 1.0, 0.3, 512};
    const auto M = assemble(spec);
    const auto cp = coefficient_problem(kR, kD, 1.0, 0.3);
    std::vector<double> ones(512, 1.0), out(512);
    M.multiply(ones, out);
    double mat_norm = 0.0;
    for (int i = 0; i < 512; ++i)
        mat_norm = std::max(mat_norm, std::abs(M.sub[i]) + std::abs(M.diag[i]) +
                                          std::abs(M.super[i]));
    for (int i = 0; i < 512; ++i)
        CHECK(std::abs(out[i] - cp.zero_order(i / 512.0)) <=
              1e-14 * mat_norm);
}

TEST_CASE("assemble rejects bad input") {
    CHECK_THROWS_AS(
        assemble(OperatorSpec{kR, kD, 0.0, 0.0, 16}), DomainError);
    CHECK_THROWS_AS(
        assemble(OperatorSpec{kR, PeriodicField::constant(-1.0), 0, 0, 64}),
        DomainError);
}

TEST_CASE("principal eigenpair: constant coefficients") {
    OperatorSpec spec{PeriodicField::constant(1.0),
                      PeriodicField::constant(1.0), 0.3, 0.0, 64};
    auto res = principal_eigenpair(assemble(spec));
    CHECK(res.k == doctest::Approx(1.0).epsilon(1e-11));
    for (double v : res.phi) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));

    spec.lambda = 2.0;
    res = principal_eigenpair(assemble(spec));
    CHECK(res.k == doctest::Approx(5.0).epsilon(1e-11));
    CHECK(res.residual <= 1e-9 * (1.0 + std::abs(res.k)) + 1e-12);
}

TEST_CASE("principal eigenpair matches the dense oracle") {
    OperatorSpec spec{kR, kD, 1.0, 0.0, 512};
    const auto M = assemble(spec);
    const auto iter = principal_eigenpair(M);
    const auto dense = oracles::dense_principal_eigen(M);
    CHECK(iter.k ==
          doctest::Approx(dense.k).epsilon(1e-9));
    for (int i = 0; i < 512; i += 7)
        CHECK(iter.phi[i] == doctest::Approx(dense.phi[i]).epsilon(1e-6));
    for (double v : iter.phi) CHECK(v > 0.0);
}

TEST_CASE("adjoint equality") {
    for (double lambda : {0.0, 0.6}) {
        OperatorSpec spec{kR, kD, 1.5, lambda, 512};
        const auto M = assemble(spec);
        const double k = principal_eigenpair(M).k;
        const double kt = principal_eigenpair(M.transposed()).k;
        CHECK(std::abs(k - kt) <= 1e-9 * (1.0 + std::abs(k)));
    }
}

TEST_CASE("k_value: trivial and symmetry cases") {
    const auto one = PeriodicField::constant(1.0);
    const auto res = k_value(one, one, 0.0, 1.0, 1e-8);
    CHECK(res.k == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(res.n_used >= 512);

    const double tol = 1e-8;
    const double kp = k_value(kR, kD, 2.0, 0.7, tol).k;
    const double km = k_value(kR, kD, 2.0, -0.7, tol).k;
    CHECK(std::abs(kp - km) <= 2 * tol);

    const auto r_shift = kR + 0.3;
    const double ka = k_value(r_shift, kD, 1.0, 0.4, tol).k;
    const double kb = k_value(kR, kD, 1.0, 0.4, tol).k;
    // tol bounds the Richardson increment, not the realized error, so allow
    // a generous multiple of it for the difference of two solves.
    CHECK(std::abs(ka - kb - 0.3) <= 50 * tol);
}

TEST_CASE("constant D makes k independent of q") {
    const auto D = PeriodicField::constant(0.7);
    double k0 = 0.0;
    bool first = true;
    for (double q : {-3.0, -1.0, 0.0, 0.5, 1.0, 3.0}) {
        const double k = k_value(kR, D, q, 0.5, 1e-10).k;
        if (first) {
            k0 = k;
            first = false;
        } else {
            CHECK(std::abs(k - k0) <= 1e-10);
        }
    }
}

TEST_CASE("convexity of k in lambda") {
    std::vector<double> lams = {-1.0, -0.5, 0.0, 0.5, 1.0};
    std::vector<double> ks;
    EigenWorkspace ws;
    for (double lam : lams)
        ks.push_back(k_value(kR, kD, 1.0, lam, 1e-9, &ws).k);
    for (std::size_t i = 1; i + 1 < ks.size(); ++i)
        CHECK(ks[i - 1] - 2 * ks[i] + ks[i + 1] > 0.0);
    // Minimum of the stencil at lambda = 0.
    for (std::size_t i = 0; i < ks.size(); ++i)
        if (lams[i] != 0.0) CHECK(ks[2] < ks[i] + 1e-12);
}

TEST_CASE("second-order grid convergence") {
    const auto cp = coefficient_problem(kR, kD, 1.0, 0.0);
    const double k_ref = principal_k(cp, 1e-11).k;
    std::vector<double> errs;
    for (int n : {512, 1024, 2048, 4096})
        errs.push_back(std::abs(principal_eigenpair(assemble(cp, n)).k - k_ref));
    for (std::size_t i = 1; i < errs.size(); ++i) {
        const double ratio = errs[i - 1] / errs[i];
        CHECK(ratio >= 3.0);
        CHECK(ratio <= 5.0);
    }
}

TEST_CASE("Peclet violation at the cap is reported") {
    // Large |q| with a coarse cap forces the cell Peclet condition to fail.
    const auto cp = coefficient_problem(kR, kD, 400.0, 0.0);
    CHECK_THROWS_AS(principal_k(cp, 1e-8, 512, 1024), PecletError);
    try {
        principal_k(cp, 1e-8, 512, 1024);
    } catch (const PecletError& e) {
        CHECK(e.peclet() >= 1.0);
        CHECK(e.grid_size() == 1024);
    }
}

TEST_CASE("workspace warm start gives the same eigenvalue") {
    EigenWorkspace ws;
    const double k1 = k_value(kR, kD, 1.0, 0.5, 1e-9, &ws).k;
    const double k2 = k_value(kR, kD, 1.0, 0.5001, 1e-9, &ws).k;
    const double cold = k_value(kR, kD, 1.0, 0.5001, 1e-9).k;
    CHECK(k2 == doctest::Approx(cold).epsilon(1e-6));
    CHECK(std::abs(k1 - k2) < 1e-2);
}
