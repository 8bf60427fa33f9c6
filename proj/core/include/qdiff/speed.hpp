#pragma once

#include <optional>

#include "qdiff/eigen.hpp"
#include "qdiff/field.hpp"

namespace qdiff {

enum class Direction { right, left };

struct SpeedResult {
    double c_star = 0.0;
    double lambda_star = 0.0;
    Direction direction = Direction::right;
    double k_at_lambda_star = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int evaluations = 0;
};

/// Outcome of a spreading-speed computation. When the persistence eigenvalue
/// is not above tol the population goes extinct and no positive speed exists;
/// `speed` is empty and `k0` carries the persistence eigenvalue.
struct SpeedOutcome {
    std::optional<SpeedResult> speed;
    double k0 = 0.0;

    bool spreading() const { return speed.has_value(); }
};

/// k_q^0[r; D], the persistence eigenvalue.
double persistence(const PeriodicField& r, const PeriodicField& D, double q,
                   double tol = 1e-8, EigenWorkspace* ws = nullptr);

/// Spreading speed c*_q = inf_{lambda>0} k_q^{+/-lambda}/lambda, minimized by
/// geometric bracketing from lambda = 1 followed by golden-section search.
SpeedOutcome spreading_speed(const PeriodicField& r, const PeriodicField& D,
                             double q, Direction direction = Direction::right,
                             double tol = 1e-6);

/// Closed-form q = 1/2 speed for constant growth: 2 sqrt(r0) <sqrt(D)>_H,
/// by quadrature only.
double stratonovich_speed(double r0, const PeriodicField& D);

}  // namespace qdiff
