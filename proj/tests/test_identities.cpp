#include <doctest.h>

#include <cmath>
#include <thread>

#include "oracles.hpp"
#include "qdiff/identities.hpp"
#include "qdiff/quadrature.hpp"
#include "qdiff/speed.hpp"

using namespace qdiff;

namespace {

constexpr double kVH = 0.628078225336670676;

const PeriodicField kR = PeriodicField::cosine_squared(0.0, 1.0, 0.0);
const PeriodicField kD = PeriodicField::cosine_squared(0.1, 1.0, 0.0);

}  // namespace

TEST_CASE("h_q correction closed forms") {
    const auto zero_q = hq_correction(kD, 0.0);
    const auto zero_D = hq_correction(PeriodicField::constant(0.7), 3.0);
    for (int i = 0; i < 64; ++i) {
        const double x = i / 64.0;
        CHECK(zero_q(x) == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(zero_D(x) == doctest::Approx(0.0).epsilon(1e-14));
    }
    CHECK(hq_correction(kD, 1.0)(0.0) ==
          doctest::Approx(M_PI * M_PI).epsilon(1e-12));
}

TEST_CASE("Fickian reduction") {
    // q = 0 compares a problem with itself.
    CHECK(check_fickian_reduction(kR, kD, 0.0, 0.3).gap <= 1e-12);
    // Constant D makes h_q vanish.
    CHECK(check_fickian_reduction(kR, PeriodicField::constant(0.6), 2.0, 0.5,
                                  1e-8)
              .gap <= 2e-8);
    // The genuine identity with two independent eigensolves.
    CHECK(check_fickian_reduction(kR, kD, 1.0, 0.5, 1e-8).gap <= 1e-6);
}

TEST_CASE("space deformation map") {
    const auto triv = deform(PeriodicField::constant(1.0), kR);
    CHECK(triv.new_period == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 0; i < 32; ++i)
        CHECK(triv.P(i / 32.0) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(triv.s_q(0.5) == 0.0);
    CHECK(triv.s_q(1.0) == -0.5);

    const auto half = deform(PeriodicField::constant(4.0), kR);
    CHECK(half.new_period == doctest::Approx(0.5).epsilon(1e-12));

    const auto dp = deform(kD, kR);
    CHECK(dp.new_period == doctest::Approx(1.0 / kVH).epsilon(1e-9));
    CHECK(dp.h.front() == 0.0);
    for (std::size_t j = 1; j < dp.h.size(); ++j)
        CHECK(dp.h[j] > dp.h[j - 1]);
}

TEST_CASE("deformed eigenvalue identity") {
    // D = 1: the deformation is the identity map.
    const auto triv = deform(PeriodicField::constant(1.0), kR);
    const double lhs = deformed_eigenvalue(triv, 1.0, 0.4, 1e-8);
    const double rhs = k_value(kR, PeriodicField::constant(1.0), 1.0, 0.4,
                               1e-8)
                           .k;
    CHECK(std::abs(lhs - rhs) <= 1e-5);

    // Constant r at q = 1/2: the drift data drops out entirely.
    const auto dp_const = deform(kD, PeriodicField::constant(0.8));
    const double mu = 0.6;
    CHECK(deformed_eigenvalue(dp_const, 0.5, mu, 1e-8) ==
          doctest::Approx(0.8 + mu * mu).epsilon(1e-6));

    // General case against the direct eigenvalue.
    const auto dp = deform(kD, kR);
    const double lam = 0.4;
    const double hat =
        deformed_eigenvalue(dp, 1.0, lam * sqrt_harmonic_mean(kD), 1e-8);
    const double direct = k_value(kR, kD, 1.0, lam, 1e-8).k;
    CHECK(std::abs(hat - direct) <= 1e-5);
}

TEST_CASE("Rayleigh functional values") {
    const auto one = PeriodicField::constant(1.0);
    CHECK(rayleigh_value(kR, one, 0.7, one) ==
          doctest::Approx(0.5).epsilon(1e-10));

    // Trial D^{-q/2} realizes the harmonic-mean lower bound.
    const double q = 1.0;
    const auto trial = PeriodicField::from_functions(
        [&](double x) { return std::pow(kD(x), -q / 2); },
        [&](double x) {
            return -q / 2 * std::pow(kD(x), -q / 2 - 1) * kD.derivative(1)(x);
        },
        [&](double x) {
            const double d = kD(x), d1 = kD.derivative(1)(x),
                         d2 = kD.derivative(2)(x);
            return -q / 2 * std::pow(d, -q / 2 - 2) *
                   ((-q / 2 - 1) * d1 * d1 + d * d2);
        });
    const double bound = large_B_limit(kR, kD, q);
    CHECK(rayleigh_value(kR, kD, q, trial) ==
          doctest::Approx(bound).epsilon(1e-8));

    // The transformed eigenfunction attains the eigenvalue.
    EigenWorkspace ws;
    const double k0 = persistence(kR, kD, q, 1e-8, &ws);
    const auto eig = principal_eigenpair(assemble(OperatorSpec{kR, kD, q, 0.0,
                                                               2048}));
    std::vector<double> phi(eig.phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i)
        phi[i] = std::pow(kD(i / static_cast<double>(phi.size())), q / 2) *
                 eig.phi[i];
    CHECK(std::abs(rayleigh_value_sampled(kR, kD, q, phi) - k0) <= 1e-6);

    CHECK_THROWS_AS(
        rayleigh_value(kR, kD, 0.0, PeriodicField::constant(-1.0)),
        DomainError);
}

TEST_CASE("large-B limit closed forms") {
    CHECK(large_B_limit(kR, kD, 0.0) == doctest::Approx(0.5).epsilon(1e-10));

    // D = r turns the q = 1 weighted mean into the harmonic mean of r.
    const auto r = kD;  // strictly positive growth
    const double harm = 1.0 / integrate_period(
        PeriodicField::constant(1.0) / r);
    CHECK(large_B_limit(r, r, 1.0) == doctest::Approx(harm).epsilon(1e-10));
    CHECK(large_B_limit(r, r, 1.0) < mean_period(r));
}

TEST_CASE("full identity suite passes") {
    VerifyOptions options;
    options.workers =
        std::max(2u, std::thread::hardware_concurrency());
    const auto checks = run_verify(options);
    CHECK(checks.size() >= 38);
    for (const auto& c : checks) {
        INFO(c.identity, " ", c.case_name, " gap=", c.gap);
        CHECK(c.pass);
    }
}
