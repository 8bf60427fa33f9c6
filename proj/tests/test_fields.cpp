#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qdiff/field.hpp"
#include "qdiff/quadrature.hpp"

using namespace qdiff;

namespace {

// sqrt_harmonic_mean(0.1 + cos^2(pi x)), frozen from adaptive quadrature at
// 1e-12.
constexpr double kVH = 0.628078225336670676;
// 1/I0(1) where I0 is the modified Bessel function.
constexpr double kInvBesselI0 = 0.789848314825111966;

}  // namespace

TEST_CASE("evaluation of closed-form kinds") {
    CHECK(PeriodicField::constant(1.0)(0.37) == 1.0);
    const auto D = PeriodicField::cosine_squared(0.1, 1.0, 0.0);
    CHECK(D(0.0) == doctest::Approx(1.1).epsilon(1e-14));
    CHECK(D(1.25) == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("periodicity of closed-form kinds") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> xs(-3.0, 3.0);
    std::uniform_int_distribution<int> ns(-5, 5);
    const PeriodicField fields[] = {
        PeriodicField::cosine_squared(0.1, 1.0, 0.3),
        PeriodicField::constant(2.5),
        build_periodic_spline({0.2, 0.8, 0.3, 0.2}),
    };
    for (const auto& f : fields)
        for (int t = 0; t < 50; ++t) {
            const double x = xs(rng);
            const int n = ns(rng);
            CHECK(f(x) ==
                  doctest::Approx(f(x + n * f.period())).epsilon(1e-12));
        }
}

TEST_CASE("analytic derivatives") {
    const auto c = PeriodicField::constant(3.0);
    CHECK(c.derivative(1)(0.4) == 0.0);
    const auto D = PeriodicField::cosine_squared(0.1, 1.0, 0.0);
    CHECK(D.derivative(1)(0.0) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(D.derivative(2)(0.0) ==
          doctest::Approx(-2.0 * M_PI * M_PI).epsilon(1e-12));
    CHECK_THROWS_AS(D.derivative(3), DomainError);
    CHECK_THROWS_AS(D.derivative(0), DomainError);
}

TEST_CASE("second derivative consistent with iterated first derivative") {
    const auto D = PeriodicField::cosine_squared(0.2, 0.7, 0.13);
    const auto d11 = D.derivative(1).derivative(1);
    const auto d2 = D.derivative(2);
    for (int i = 0; i < 256; ++i) {
        const double x = i / 256.0;
        CHECK(d11(x) == doctest::Approx(d2(x)).epsilon(1e-6));
    }
}

TEST_CASE("power harmonic mean") {
    for (double p : {-1.5, 0.5, 1.0, 3.0})
        CHECK(power_harmonic_mean(PeriodicField::constant(4.0), p) ==
              doctest::Approx(4.0).epsilon(1e-12));
    CHECK(sqrt_harmonic_mean(PeriodicField::constant(4.0)) ==
          doctest::Approx(2.0).epsilon(1e-12));

    const auto expsin = PeriodicField::from_functions(
        [](double x) { return std::exp(std::sin(2 * M_PI * x)); },
        [](double x) {
            return 2 * M_PI * std::cos(2 * M_PI * x) *
                   std::exp(std::sin(2 * M_PI * x));
        },
        [](double x) {
            const double w = 2 * M_PI;
            const double s = std::sin(w * x), c = std::cos(w * x);
            return w * w * (c * c - s) * std::exp(s);
        });
    CHECK(power_harmonic_mean(expsin, 1.0) ==
          doctest::Approx(kInvBesselI0).epsilon(1e-10));

    const auto D = PeriodicField::cosine_squared(0.1, 1.0, 0.0);
    CHECK(sqrt_harmonic_mean(D) == doctest::Approx(kVH).epsilon(1e-11));
    // Cross-check the golden constant against the adaptive oracle.
    const double integral = oracles::adaptive_quadrature(
        [&](double x) { return 1.0 / std::sqrt(D(x)); }, 0.0, 1.0, 1e-13);
    CHECK(1.0 / integral == doctest::Approx(kVH).epsilon(1e-12));

    CHECK_THROWS_AS(power_harmonic_mean(PeriodicField::constant(-1.0), 1.0),
                    DomainError);
}

TEST_CASE("Jensen ordering for nonconstant positive fields") {
    const PeriodicField fields[] = {
        PeriodicField::cosine_squared(0.1, 1.0, 0.0),
        PeriodicField::cosine_squared(0.3, 0.5, 0.2),
        build_periodic_spline({0.2, 0.8, 0.3, 0.2}),
    };
    for (const auto& f : fields) {
        const double arith = mean_period(f);
        const double harm = 1.0 / mean_period(
            PeriodicField::constant(1.0, f.period()) / f);
        CHECK(arith > harm);
    }
}

TEST_CASE("periodic spline construction") {
    const auto flat = build_periodic_spline({0.5, 0.5, 0.5, 0.5});
    CHECK(flat(0.123) == doctest::Approx(0.5).epsilon(1e-13));

    const auto s = build_periodic_spline({0.2, 0.8, 0.8, 0.2});
    CHECK(s(0.0) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(s(1.0 / 3.0) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(s(2.0 / 3.0) == doctest::Approx(0.8).epsilon(1e-12));

    CHECK_THROWS_AS(build_periodic_spline({0.2, 0.8, 0.3, 0.25}), DomainError);
    CHECK_THROWS_AS(build_periodic_spline({0.05, 0.8, 0.3, 0.05}),
                    DomainError);
    CHECK_THROWS_AS(build_periodic_spline({0.2, 1.2, 0.3, 0.2}), DomainError);
}

TEST_CASE("spline matches the dense periodic-spline oracle") {
    const std::vector<double> y = {0.2, 0.8, 0.3};
    const auto s = build_periodic_spline({0.2, 0.8, 0.3, 0.2});
    const auto moments = oracles::dense_periodic_spline_moments(y, 1.0);
    const int n = 3;
    const double h = 1.0 / n;
    auto oracle_eval = [&](double x) {
        const int j = std::min(static_cast<int>(x / h), n - 1);
        const double a = j * h, b = (j + 1) * h;
        const double ma = moments[j], mb = moments[(j + 1) % n];
        const double ya = y[j], yb = y[(j + 1) % n];
        return ma * std::pow(b - x, 3) / (6 * h) +
               mb * std::pow(x - a, 3) / (6 * h) +
               (ya - ma * h * h / 6) * (b - x) / h +
               (yb - mb * h * h / 6) * (x - a) / h;
    };
    for (int j = 0; j < n; ++j) {
        const double mid = (j + 0.5) * h;
        CHECK(s(mid) == doctest::Approx(oracle_eval(mid)).epsilon(1e-12));
    }
}

TEST_CASE("spline seam continuity") {
    const auto s = build_periodic_spline({0.2, 0.8, 0.3, 0.2});
    const double eps = 1e-6;
    // One-sided first differences across the seam.
    const double left = (s(1.0) - s(1.0 - eps)) / eps;
    const double right = (s(1.0 + eps) - s(1.0)) / eps;
    CHECK(left == doctest::Approx(right).epsilon(1e-4));
    // Second differences across the seam.
    const double l2 = (s(1.0) - 2 * s(1.0 - eps) + s(1.0 - 2 * eps)) /
                      (eps * eps);
    const double r2 = (s(1.0 + 2 * eps) - 2 * s(1.0 + eps) + s(1.0)) /
                      (eps * eps);
    CHECK(l2 == doctest::Approx(r2).epsilon(1e-2).scale(1.0 + std::abs(l2)));
    // Exact derivative fields agree at the seam from both representations.
    CHECK(s.derivative(1)(0.0) ==
          doctest::Approx(s.derivative(1)(1.0)).epsilon(1e-10));
    CHECK(s.derivative(2)(0.0) ==
          doctest::Approx(s.derivative(2)(1.0)).epsilon(1e-10));
}

TEST_CASE("phase shift") {
    const auto D = PeriodicField::cosine_squared(0.0, 1.0, 0.0);
    const auto same = phase_shift(D, 0.0);
    const auto full = phase_shift(D, 1.0);
    for (int i = 0; i < 32; ++i) {
        const double x = i / 32.0;
        CHECK(same(x) == doctest::Approx(D(x)).epsilon(1e-13));
        CHECK(full(x) == doctest::Approx(D(x)).epsilon(1e-12));
    }
    CHECK(phase_shift(D, 0.5)(0.0) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("find_extrema") {
    const auto D = PeriodicField::cosine_squared(0.1, 1.0, 0.0);
    const auto ex = find_extrema(D);
    REQUIRE(ex.maxima.size() == 1);
    REQUIRE(ex.minima.size() == 1);
    CHECK(ex.maxima[0].location == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(ex.minima[0].location == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(ex.maxima[0].second_derivative < 0);
    CHECK(ex.minima[0].second_derivative > 0);

    const auto flat = find_extrema(PeriodicField::constant(2.0));
    CHECK(flat.degenerate_everywhere);
    CHECK(flat.minima.empty());
    CHECK(flat.maxima.empty());

    const auto expsin = PeriodicField::from_functions(
        [](double x) { return std::exp(std::sin(2 * M_PI * x)); },
        [](double x) {
            return 2 * M_PI * std::cos(2 * M_PI * x) *
                   std::exp(std::sin(2 * M_PI * x));
        },
        [](double x) {
            const double w = 2 * M_PI;
            const double s = std::sin(w * x), c = std::cos(w * x);
            return w * w * (c * c - s) * std::exp(s);
        });
    const auto ex2 = find_extrema(expsin);
    REQUIRE(ex2.maxima.size() == 1);
    REQUIRE(ex2.minima.size() == 1);
    CHECK(ex2.maxima[0].location == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(ex2.minima[0].location == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("positivity guard") {
    CHECK_NOTHROW(require_positive(PeriodicField::cosine_squared(0.1, 1, 0)));
    CHECK_THROWS_AS(require_positive(PeriodicField::cosine_squared(0, 1, 0)),
                    DomainError);
    CHECK_THROWS_AS(require_positive(PeriodicField::constant(-1.0)),
                    DomainError);
}

TEST_CASE("field arithmetic and sampled derivatives") {
    const auto D = PeriodicField::cosine_squared(0.1, 1.0, 0.0);
    const auto sum = D + PeriodicField::constant(1.0);
    CHECK(sum(0.3) == doctest::Approx(D(0.3) + 1.0).epsilon(1e-14));
    const auto prod = 2.0 * D;
    CHECK(prod(0.3) == doctest::Approx(2.0 * D(0.3)).epsilon(1e-14));

    std::vector<double> vals(256);
    for (int i = 0; i < 256; ++i) vals[i] = D(i / 256.0);
    const auto samp = PeriodicField::sampled(vals);
    CHECK(samp(0.1234) == doctest::Approx(D(0.1234)).epsilon(1e-8));
    CHECK(samp.derivative(1)(0.3) ==
          doctest::Approx(D.derivative(1)(0.3)).epsilon(1e-6));
    CHECK(samp.derivative(2)(0.3) ==
          doctest::Approx(D.derivative(2)(0.3))
              .scale(1.0 + std::abs(D.derivative(2)(0.3)))
              .epsilon(1e-5));
}

TEST_CASE("quadrature matches the adaptive oracle") {
    auto f = [](double x) { return std::exp(std::sin(2 * M_PI * x)) + x * x; };
    const double ref = oracles::adaptive_quadrature(f, 0.0, 1.0, 1e-13);
    CHECK(integrate(f, 0.0, 1.0) == doctest::Approx(ref).epsilon(1e-11));

    const auto D = PeriodicField::cosine_squared(0.1, 1.0, 0.0);
    CHECK(integrate_period(D) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(mean_period(D) == doctest::Approx(0.6).epsilon(1e-12));
}
