#include "qdiff/speed.hpp"

#include <cmath>
#include <map>

#include "qdiff/quadrature.hpp"

namespace qdiff {

double persistence(const PeriodicField& r, const PeriodicField& D, double q,
                   double tol, EigenWorkspace* ws) {
    return k_value(r, D, q, 0.0, tol, ws).k;
}

double stratonovich_speed(double r0, const PeriodicField& D) {
    if (!(r0 > 0.0))
        throw DomainError("stratonovich_speed: r0 must be positive");
    return 2.0 * std::sqrt(r0) * sqrt_harmonic_mean(D);
}

namespace {
constexpr double kGolden = 0.6180339887498949;  // (sqrt(5)-1)/2
}

SpeedOutcome spreading_speed(const PeriodicField& r, const PeriodicField& D,
                             double q, Direction direction, double tol) {
    if (!(tol > 0.0)) throw DomainError("spreading_speed: tol must be > 0");

    EigenWorkspace ws;
    SpeedOutcome out;
    out.k0 = persistence(r, D, q, std::min(tol, 1e-8), &ws);
    if (!(out.k0 > tol)) return out;  // extinction: no positive speed

    const double sign = direction == Direction::right ? 1.0 : -1.0;
    int evaluations = 0;
    std::map<double, double> k_cache;  // lambda -> k

    auto k_at = [&](double lam) {
        if (auto it = k_cache.find(lam); it != k_cache.end())
            return it->second;
        // Eigenvalue error enters c = k/lambda divided by lambda.
        const double eig_tol = std::max(1e-2 * tol * lam, 1e-13);
        const double k = k_value(r, D, q, sign * lam, eig_tol, &ws).k;
        ++evaluations;
        k_cache[lam] = k;
        return k;
    };
    auto g = [&](double lam) { return k_at(lam) / lam; };

    // Geometric bracketing around lambda = 1.
    double center = 1.0;
    double ga = g(center / 2.0), gm = g(center), gb = g(2.0 * center);
    while (!(gm < ga && gm < gb)) {
        if (ga <= gm) {
            center /= 2.0;
            gb = gm;
            gm = ga;
            ga = g(center / 2.0);
        } else {
            center *= 2.0;
            ga = gm;
            gm = gb;
            gb = g(2.0 * center);
        }
        if (center > std::ldexp(1.0, 40) || center < std::ldexp(1.0, -40))
            throw ConvergenceError(
                "spreading_speed: bracket expansion exceeded 2^40");
    }

    double lo = center / 2.0, hi = 2.0 * center;
    const double bracket_lo = lo, bracket_hi = hi;

    // Golden-section search; g is unimodal on the bracket. The minimum is
    // quadratic, so an interval of width sqrt(tol) already pins the value of
    // g to O(tol); the 1e-6 floor keeps lambda_star itself sharp.
    const double interval_tol = std::max(1e-6, 0.03 * std::sqrt(tol));
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    while (hi - lo > interval_tol * (1.0 + 0.5 * (lo + hi))) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kGolden * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kGolden * (hi - lo);
            f2 = g(x2);
        }
    }

    SpeedResult res;
    res.lambda_star = f1 <= f2 ? x1 : x2;
    res.k_at_lambda_star = k_at(res.lambda_star);
    res.c_star = res.k_at_lambda_star / res.lambda_star;
    res.direction = direction;
    res.bracket_lo = bracket_lo;
    res.bracket_hi = bracket_hi;
    res.evaluations = evaluations;
    out.speed = res;
    return out;
}

}  // namespace qdiff
