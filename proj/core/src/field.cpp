#include "qdiff/field.hpp"

#include <algorithm>
#include <cmath>

#include "field_impl.hpp"
#include "qdiff/quadrature.hpp"

namespace qdiff {

using detail::FieldImpl;
using detail::ImplPtr;

PeriodicField::PeriodicField()
    : impl_(std::make_shared<detail::ConstantImpl>(0.0, 1.0)) {}

PeriodicField::PeriodicField(std::shared_ptr<const FieldImpl> impl)
    : impl_(std::move(impl)) {}

double PeriodicField::operator()(double x) const { return impl_->value(x); }
double PeriodicField::period() const { return impl_->period(); }

PeriodicField PeriodicField::derivative(int order) const {
    switch (order) {
        case 1: return PeriodicField(impl_->derivative1());
        case 2: return PeriodicField(impl_->derivative2());
        default: throw DomainError("derivative order must be 1 or 2");
    }
}

PeriodicField PeriodicField::shifted(double omega) const {
    return PeriodicField(std::make_shared<detail::ShiftImpl>(impl_, omega));
}

std::string PeriodicField::describe() const { return impl_->describe(); }

PeriodicField PeriodicField::constant(double value, double period) {
    if (period <= 0) throw DomainError("period must be positive");
    return PeriodicField(std::make_shared<detail::ConstantImpl>(value, period));
}

PeriodicField PeriodicField::cosine_squared(double offset, double amplitude,
                                            double phase, double period) {
    if (period <= 0) throw DomainError("period must be positive");
    // offset + amp cos^2 = (offset + amp/2) + (amp/2) cos(2 pi (x+phase)/L)
    const std::string label = "cos2:" + detail::fmt_num(offset) + "," +
                              detail::fmt_num(amplitude) + "," +
                              detail::fmt_num(phase);
    return PeriodicField(std::make_shared<detail::HarmonicImpl>(
        offset + amplitude / 2.0, amplitude / 2.0, 0.0, phase, period, label));
}

PeriodicField PeriodicField::spline(std::vector<double> knot_values,
                                    double period) {
    if (period <= 0) throw DomainError("period must be positive");
    return PeriodicField(
        std::make_shared<detail::SplineImpl>(std::move(knot_values), period));
}

PeriodicField PeriodicField::sampled(std::vector<double> values,
                                     double period) {
    if (period <= 0) throw DomainError("period must be positive");
    return PeriodicField(
        std::make_shared<detail::SampledImpl>(std::move(values), period));
}

PeriodicField PeriodicField::from_functions(std::function<double(double)> value,
                                            std::function<double(double)> d1,
                                            std::function<double(double)> d2,
                                            double period) {
    if (period <= 0) throw DomainError("period must be positive");
    return PeriodicField(std::make_shared<detail::LambdaImpl>(
        std::move(value), std::move(d1), std::move(d2), period));
}

namespace {
PeriodicField combine(detail::BinOp op, const PeriodicField& a,
                      const PeriodicField& b) {
    return PeriodicField(
        std::make_shared<detail::CompositeImpl>(op, a.impl(), b.impl()));
}
}  // namespace

PeriodicField operator+(const PeriodicField& a, const PeriodicField& b) {
    return combine(detail::BinOp::add, a, b);
}
PeriodicField operator-(const PeriodicField& a, const PeriodicField& b) {
    return combine(detail::BinOp::sub, a, b);
}
PeriodicField operator*(const PeriodicField& a, const PeriodicField& b) {
    return combine(detail::BinOp::mul, a, b);
}
PeriodicField operator/(const PeriodicField& a, const PeriodicField& b) {
    return combine(detail::BinOp::div, a, b);
}
PeriodicField operator*(double alpha, const PeriodicField& f) {
    return PeriodicField(
        std::make_shared<detail::AffineImpl>(alpha, f.impl(), 0.0));
}
PeriodicField operator+(const PeriodicField& f, double beta) {
    return PeriodicField(
        std::make_shared<detail::AffineImpl>(1.0, f.impl(), beta));
}
PeriodicField operator-(const PeriodicField& f, double beta) {
    return f + (-beta);
}

PeriodicField phase_shift(const PeriodicField& f, double omega) {
    return f.shifted(omega);
}

double min_on_scan(const PeriodicField& f, int scan_n) {
    const double L = f.period();
    double m = f(0.0);
    for (int i = 1; i < scan_n; ++i) m = std::min(m, f(i * L / scan_n));
    return m;
}

double max_on_scan(const PeriodicField& f, int scan_n) {
    const double L = f.period();
    double m = f(0.0);
    for (int i = 1; i < scan_n; ++i) m = std::max(m, f(i * L / scan_n));
    return m;
}

void require_positive(const PeriodicField& D, int scan_n, double floor) {
    if (min_on_scan(D, scan_n) < floor)
        throw DomainError("diffusion coefficient below positivity floor " +
                          detail::fmt_num(floor));
}

// Power mean of order -p: ((1/L) int f^{-p})^{-1/p}. Reduces to the plain
// harmonic mean at p = 1 and to the field's constant for constant fields.
double power_harmonic_mean(const PeriodicField& f, double p) {
    if (p == 0.0) throw DomainError("power_harmonic_mean: p must be nonzero");
    const double L = f.period();
    if (min_on_scan(f, 1024) <= 0.0)
        throw DomainError("power_harmonic_mean: field not strictly positive");
    const double mean =
        integrate([&](double x) { return std::pow(f(x), -p); }, 0.0, L) / L;
    return std::pow(mean, -1.0 / p);
}

double sqrt_harmonic_mean(const PeriodicField& D) {
    const double L = D.period();
    if (min_on_scan(D, 1024) <= 0.0)
        throw DomainError("sqrt_harmonic_mean: field not strictly positive");
    const double mean =
        integrate([&](double x) { return 1.0 / std::sqrt(D(x)); }, 0.0, L) / L;
    return 1.0 / mean;
}

PeriodicField build_periodic_spline(const std::array<double, 4>& control) {
    if (std::abs(control[0] - control[3]) > 1e-12)
        throw DomainError("spline control: seam mismatch (first != last)");
    for (double v : control)
        if (v <= 0.1 || v >= 1.0)
            throw DomainError("spline control value outside (0.1, 1)");
    PeriodicField f = PeriodicField::spline(
        {control[0], control[1], control[2]}, 1.0);
    if (min_on_scan(f, 1024) <= 0.0)
        throw DomainError("periodic spline not positive");
    return f;
}

ExtremaSet find_extrema(const PeriodicField& f, int scan_n) {
    if (scan_n < 64) throw DomainError("find_extrema: scan_n must be >= 64");
    const double L = f.period();
    const PeriodicField d1 = f.derivative(1);
    const PeriodicField d2 = f.derivative(2);

    ExtremaSet out;

    // Sample at half-offset nodes so roots at round locations fall strictly
    // inside scan intervals.
    std::vector<double> xs(scan_n + 1), gs(scan_n + 1);
    double gmax = 0.0;
    for (int i = 0; i <= scan_n; ++i) {
        xs[i] = (i + 0.5) * L / scan_n;
        gs[i] = d1(xs[i]);
        gmax = std::max(gmax, std::abs(gs[i]));
    }
    if (gmax < 1e-12) {
        out.degenerate_everywhere = true;
        return out;
    }

    for (int i = 0; i < scan_n; ++i) {
        if (gs[i] == 0.0 || gs[i] * gs[i + 1] > 0.0) continue;
        double a = xs[i], b = xs[i + 1], ga = gs[i];
        while (b - a > 1e-12) {
            const double m = 0.5 * (a + b), gm = d1(m);
            if (ga * gm <= 0.0) {
                b = m;
            } else {
                a = m;
                ga = gm;
            }
        }
        const double root = detail::wrap(0.5 * (a + b), L);
        const double curv = d2(root);
        if (std::abs(curv) < 1e-8) {
            out.degenerate.push_back(root);
        } else if (curv > 0.0) {
            out.minima.push_back({root, f(root), curv});
        } else {
            out.maxima.push_back({root, f(root), curv});
        }
    }
    auto by_loc = [](const Extremum& a, const Extremum& b) {
        return a.location < b.location;
    };
    std::sort(out.minima.begin(), out.minima.end(), by_loc);
    std::sort(out.maxima.begin(), out.maxima.end(), by_loc);
    std::sort(out.degenerate.begin(), out.degenerate.end());
    return out;
}

}  // namespace qdiff
