#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "qdiff/field.hpp"

namespace qdiff {

/// Simulated annealing over the 4-control-point spline diffusion
/// coefficient, maximizing a ratio of spreading speeds c*_{q_num}/c*_{q_den}
/// with the growth rate fixed.
struct AnnealConfig {
    double q_num = 0.0;
    double q_den = 1.0;
    PeriodicField r = PeriodicField::cosine_squared(0.0, 1.0, 0.0);
    double bound_lo = 0.1;
    double bound_hi = 1.0;
    int n_iters = 2000;
    double T0 = 0.1;
    double cool = 0.95;                 // applied every cool_every iterations
    int cool_every = 20;
    double proposal_sigma = 0.05;
    std::uint64_t seed = 0;
    double speed_tol = 1e-4;            // relative tolerance per speed eval
    std::array<double, 4> initial{0.5, 0.5, 0.5, 0.5};
};

struct AnnealHistoryEntry {
    int iteration = 0;
    double ratio = 0.0;
    bool accepted = false;
};

struct AnnealResult {
    std::array<double, 4> best_control{};
    double best_ratio = 0.0;
    std::vector<AnnealHistoryEntry> history;
    long evaluations = 0;               // actual speed-pair computations (cache misses)
};

/// Ratio c*_{q_num}/c*_{q_den} for the spline built from `control`; returns 0
/// (the extinction penalty) when either speed is not defined or the control
/// points interpolate to a profile that is not positive.
double objective_eval(const std::array<double, 4>& control,
                      const AnnealConfig& cfg);

/// Metropolis chain on the 3 free control values with Gaussian proposals,
/// clipped to bounds, seam equality enforced, geometric cooling.
/// Deterministic given cfg.seed.
AnnealResult run_annealing(const AnnealConfig& cfg);

}  // namespace qdiff
