#include "qdiff/anneal.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qdiff/speed.hpp"

namespace qdiff {

double objective_eval(const std::array<double, 4>& control,
                      const AnnealConfig& cfg) {
    PeriodicField D;
    try {
        D = build_periodic_spline(control);
    } catch (const DomainError&) {
        // In-bounds control points can still interpolate to a profile that
        // dips below zero; score it like extinction instead of aborting.
        return 0.0;
    }
    const SpeedOutcome num =
        spreading_speed(cfg.r, D, cfg.q_num, Direction::right, cfg.speed_tol);
    if (!num.spreading()) return 0.0;
    const SpeedOutcome den =
        spreading_speed(cfg.r, D, cfg.q_den, Direction::right, cfg.speed_tol);
    if (!den.spreading()) return 0.0;
    return num.speed->c_star / den.speed->c_star;
}

namespace {

using Key = std::array<long long, 3>;

Key cache_key(const std::array<double, 4>& control) {
    return {std::llround(control[0] * 1e6), std::llround(control[1] * 1e6),
            std::llround(control[2] * 1e6)};
}

}  // namespace

AnnealResult run_annealing(const AnnealConfig& cfg) {
    if (!(cfg.bound_lo < cfg.bound_hi))
        throw DomainError("annealing: bounds out of order");
    const double lo = cfg.bound_lo + 1e-6;
    const double hi = cfg.bound_hi - 1e-6;
    auto clip = [&](double v) { return std::clamp(v, lo, hi); };

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> jump(0.0, cfg.proposal_sigma);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::map<Key, double> cache;
    AnnealResult out;
    auto evaluate = [&](const std::array<double, 4>& control) {
        const Key key = cache_key(control);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
        const double ratio = objective_eval(control, cfg);
        ++out.evaluations;
        cache[key] = ratio;
        return ratio;
    };

    std::array<double, 4> current = cfg.initial;
    for (double& v : current) v = clip(v);
    current[3] = current[0];
    double current_ratio = evaluate(current);
    out.best_control = current;
    out.best_ratio = current_ratio;
    out.history.reserve(cfg.n_iters);

    for (int it = 1; it <= cfg.n_iters; ++it) {
        const double T =
            cfg.T0 * std::pow(cfg.cool, (it - 1) / cfg.cool_every);

        std::array<double, 4> proposal = current;
        for (int j = 0; j < 3; ++j) proposal[j] = clip(proposal[j] + jump(rng));
        proposal[3] = proposal[0];
        const double ratio = evaluate(proposal);
        const double u = unit(rng);

        const double delta = ratio - current_ratio;
        const bool accepted = delta >= 0.0 || u < std::exp(delta / T);
        if (accepted) {
            current = proposal;
            current_ratio = ratio;
        }
        if (ratio > out.best_ratio) {
            out.best_ratio = ratio;
            out.best_control = proposal;
        }
        out.history.push_back({it, ratio, accepted});
    }
    return out;
}

}  // namespace qdiff
