#include "qdiff/pdesim.hpp"

#include <algorithm>
#include <cmath>

namespace qdiff {

namespace detail {

Simulator::Simulator(const SimConfig& cfg) : cfg_(cfg) {
    const double L = cfg.D.period();
    if (!(cfg.dx > 0.0)) throw DomainError("simulator: dx must be positive");
    const double cells_per_period = L / cfg.dx;
    if (std::abs(cells_per_period - std::round(cells_per_period)) > 1e-9)
        throw DomainError("simulator: dx must divide the period");
    const double periods = cfg.domain_length / L;
    if (std::abs(periods - std::round(periods)) > 1e-9)
        throw DomainError(
            "simulator: domain length must be a multiple of the period");
    if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0))
        throw DomainError("simulator: cfl_safety must be in (0, 1]");
    require_positive(cfg.D);

    dx_ = cfg.dx;
    n_ = static_cast<int>(std::round(cfg.domain_length / dx_));
    u_.assign(n_, 0.0);
    unew_.assign(n_, 0.0);
    r_.resize(n_);
    dq_.resize(n_);
    dface_.resize(n_);
    for (int i = 0; i < n_; ++i) {
        const double x = i * dx_;
        r_[i] = cfg.r(x);
        dq_[i] = std::pow(cfg.D(x), cfg.q);
        const double d_face = std::sqrt(cfg.D(x) * cfg.D(x + dx_));
        dface_[i] = std::pow(d_face, 1.0 - cfg.q);
    }

    // Explicit Euler stability: the coefficient coupling u_i to a neighbour
    // is D_face^{1-q} D_nb^q / dx^2, so bound by the largest such product.
    double coupling = 0.0;
    for (int i = 0; i < n_; ++i) {
        coupling = std::max(coupling, dface_[i] * dq_[i]);
        coupling = std::max(coupling, dface_[i] * dq_[(i + 1) % n_]);
    }
    double max_r = 0.0;
    for (double v : r_) max_r = std::max(max_r, std::abs(v));
    dt_ = cfg.cfl_safety * dx_ * dx_ / (2.0 * coupling);
    if (max_r > 0.0) dt_ = std::min(dt_, 0.1 / max_r);
    dt_ = std::min(dt_, cfg.sample_interval);
}

void Simulator::advance() {
    const double inv_dx = 1.0 / dx_;
    double flux_left = 0.0;  // zero-flux boundary
    for (int i = 0; i < n_; ++i) {
        const double w = dq_[i] * u_[i];
        const double w_right = i + 1 < n_ ? dq_[i + 1] * u_[i + 1] : 0.0;
        const double flux_right = dface_[i] * (w_right - w) * inv_dx;
        const double growth = u_[i] * (r_[i] - u_[i]);
        double next = u_[i] + dt_ * ((flux_right - flux_left) * inv_dx + growth);
        if (!std::isfinite(next) || next < -1e-12)
            throw ConvergenceError(
                "simulator: state left [0, inf) (reduce dt or dx)");
        if (next < 0.0) next = 0.0;
        unew_[i] = next;
        flux_left = flux_right;
    }
    u_.swap(unew_);
}

double Simulator::front_position(double level) const {
    for (int i = n_ - 1; i >= 0; --i) {
        if (u_[i] >= level) {
            if (i + 1 >= n_) return (n_ - 1) * dx_;
            const double drop = u_[i] - u_[i + 1];
            const double frac = drop > 0.0 ? (u_[i] - level) / drop : 0.0;
            return (i + std::min(frac, 1.0)) * dx_;
        }
    }
    return 0.0;
}

}  // namespace detail

std::vector<double> step(const std::vector<double>& state,
                         const SimConfig& cfg) {
    detail::Simulator sim(cfg);
    if (static_cast<int>(state.size()) != sim.cells())
        throw DomainError("step: state size does not match the grid");
    sim.state() = state;
    sim.advance();
    return sim.state();
}

FrontTrace measure_front_speed(const SimConfig& cfg) {
    detail::Simulator sim(cfg);
    const int n = sim.cells();
    const double dx = sim.dx();
    for (int i = 0; i < n; ++i)
        sim.state()[i] = i * dx <= cfg.initial_width ? 1.0 : 0.0;

    FrontTrace trace;
    trace.dt = sim.dt();
    trace.dx = dx;
    const long steps_per_sample =
        std::max(1L, std::lround(cfg.sample_interval / sim.dt()));
    // The Dirichlet wall carves out a standing layer about one period wide,
    // so a level crossing never reaches the last cells; flag contamination
    // as soon as the front enters the final two periods.
    const double boundary = (n - 2) * dx - 2.0 * cfg.D.period();

    double t = 0.0;
    trace.times.push_back(0.0);
    trace.positions.push_back(sim.front_position(cfg.level));
    while (t < cfg.t_final) {
        for (long s = 0; s < steps_per_sample; ++s) sim.advance();
        t += steps_per_sample * sim.dt();
        const double pos = sim.front_position(cfg.level);
        trace.times.push_back(t);
        trace.positions.push_back(pos);
        if (pos >= boundary) {
            trace.hit_boundary = true;
            break;
        }
    }

    // Least-squares line through the post-transient samples.
    const double t_cut = cfg.transient_fraction * cfg.t_final;
    std::size_t first = 0;
    while (first < trace.times.size() && trace.times[first] < t_cut) ++first;
    const std::size_t m = trace.times.size() - first;
    if (m >= 2) {
        double st = 0, sp = 0, stt = 0, stp = 0;
        for (std::size_t i = first; i < trace.times.size(); ++i) {
            st += trace.times[i];
            sp += trace.positions[i];
            stt += trace.times[i] * trace.times[i];
            stp += trace.times[i] * trace.positions[i];
        }
        const double denom = m * stt - st * st;
        trace.fitted_speed = (m * stp - st * sp) / denom;
        const double intercept = (sp - trace.fitted_speed * st) / m;
        double ss = 0.0;
        for (std::size_t i = first; i < trace.times.size(); ++i) {
            const double e = trace.positions[i] -
                             (intercept + trace.fitted_speed * trace.times[i]);
            ss += e * e;
        }
        trace.fit_residual = std::sqrt(ss / m);
        for (std::size_t i = first + 1; i < trace.times.size(); ++i)
            if (trace.positions[i] < trace.positions[i - 1] - 1e-12)
                trace.monotone = false;
    }
    return trace;
}

}  // namespace qdiff
