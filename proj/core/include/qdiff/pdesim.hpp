#pragma once

#include <vector>

#include "qdiff/field.hpp"

namespace qdiff {

/// Direct explicit time-stepping of the reaction-diffusion equation with KPP
/// nonlinearity u (r(x) - u), used as an independent cross-check of the
/// eigenvalue-based speeds.
struct SimConfig {
    PeriodicField r;
    PeriodicField D;
    double q = 0.0;
    double domain_length = 200.0;        // multiple of the period
    double dx = 1.0 / 128.0;             // must divide the period
    double cfl_safety = 0.4;             // in (0, 1]
    double t_final = 50.0;
    double level = 0.5;                  // front tracking level
    double transient_fraction = 0.3;     // discarded before the speed fit
    double initial_width = 10.0;
    double sample_interval = 0.25;       // front positions recorded every so often
};

struct FrontTrace {
    std::vector<double> times;
    std::vector<double> positions;       // rightmost x with u >= level
    double fitted_speed = 0.0;
    double fit_residual = 0.0;           // rms residual of the line fit
    double dt = 0.0;
    double dx = 0.0;
    bool hit_boundary = false;           // front entered the last two periods
    bool monotone = true;                // positions nondecreasing after transient
};

/// One explicit Euler step with conservative fluxes
///   F_{i+1/2} = D_{i+1/2}^{1-q} ((D^q u)_{i+1} - (D^q u)_i) / dx,
/// face D by geometric mean. Zero-flux on the left, u = 0 on the right.
std::vector<double> step(const std::vector<double>& state,
                         const SimConfig& cfg);

/// Runs the front experiment: u0 = 1 on [0, initial_width], tracks the level
/// set and least-squares fits the post-transient positions.
FrontTrace measure_front_speed(const SimConfig& cfg);

namespace detail {

/// Time stepper with preallocated buffers; `step` above wraps one call.
class Simulator {
public:
    explicit Simulator(const SimConfig& cfg);

    void advance();                      // one time step
    double front_position(double level) const;
    const std::vector<double>& state() const { return u_; }
    std::vector<double>& state() { return u_; }
    double dt() const { return dt_; }
    int cells() const { return n_; }
    double dx() const { return dx_; }

private:
    SimConfig cfg_;
    int n_;
    double dx_, dt_;
    std::vector<double> u_, unew_;
    std::vector<double> r_, dq_, dface_;  // r_i, D_i^q, D_{i+1/2}^{1-q}
};

}  // namespace detail
}  // namespace qdiff
