#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qdiff/errors.hpp"

namespace qdiff {

namespace detail {
class FieldImpl;
}

/// An immutable 1-periodic (more generally L-periodic) real coefficient
/// function. Closed-form kinds (constant, shifted cosine-squared, periodic
/// cubic spline) evaluate and differentiate analytically; sampled fields
/// interpolate with a periodic cubic spline and differentiate with 4th-order
/// periodic stencils. Values are shareable across threads.
class PeriodicField {
public:
    /// Default-constructed field is the constant 0 with period 1.
    PeriodicField();

    double operator()(double x) const;
    double period() const;

    /// Analytic derivative where the kind permits, finite differences for
    /// sampled data. order must be 1 or 2.
    PeriodicField derivative(int order) const;

    /// Field evaluating to (*this)(x + omega).
    PeriodicField shifted(double omega) const;

    /// Short human/machine readable description, used in manifests.
    std::string describe() const;

    static PeriodicField constant(double value, double period = 1.0);

    /// offset + amplitude * cos^2(pi * (x + phase) / period).
    static PeriodicField cosine_squared(double offset, double amplitude,
                                        double phase, double period = 1.0);

    /// Periodic cubic spline through uniformly spaced knot values
    /// (values[i] at x = i * period / values.size()).
    static PeriodicField spline(std::vector<double> knot_values,
                                double period = 1.0);

    /// Values on a uniform grid, x_i = i * period / n; evaluation between
    /// nodes by periodic cubic spline interpolation.
    static PeriodicField sampled(std::vector<double> values,
                                 double period = 1.0);

    /// Closed-form field given by callables for the value and its first two
    /// derivatives. Caller asserts periodicity.
    static PeriodicField from_functions(std::function<double(double)> value,
                                        std::function<double(double)> d1,
                                        std::function<double(double)> d2,
                                        double period = 1.0);

    friend PeriodicField operator+(const PeriodicField&, const PeriodicField&);
    friend PeriodicField operator-(const PeriodicField&, const PeriodicField&);
    friend PeriodicField operator*(const PeriodicField&, const PeriodicField&);
    friend PeriodicField operator/(const PeriodicField&, const PeriodicField&);
    friend PeriodicField operator*(double, const PeriodicField&);
    friend PeriodicField operator+(const PeriodicField&, double);
    friend PeriodicField operator-(const PeriodicField&, double);

    explicit PeriodicField(std::shared_ptr<const detail::FieldImpl> impl);
    const std::shared_ptr<const detail::FieldImpl>& impl() const {
        return impl_;
    }

private:
    std::shared_ptr<const detail::FieldImpl> impl_;
};

struct Extremum {
    double location;           // in [0, period)
    double value;
    double second_derivative;
};

/// Classified critical points of a field over one period.
struct ExtremaSet {
    std::vector<Extremum> minima;
    std::vector<Extremum> maxima;
    std::vector<double> degenerate;   // polished roots with |f''| < 1e-8
    bool degenerate_everywhere = false;
};

/// Locates sign changes of f' on a scan_n grid, polishes each root by
/// bisection to 1e-12 and classifies by the sign of f''.
ExtremaSet find_extrema(const PeriodicField& f, int scan_n = 512);

/// ((1/L) * integral of f^{-p} over one period)^{-1/p}, the power mean of
/// order -p; equals the harmonic mean of f^p raised to 1/p. Requires f > 0.
double power_harmonic_mean(const PeriodicField& f, double p);

/// ((1/L) * integral of D^{-1/2})^{-1}; the harmonic mean of sqrt(D).
double sqrt_harmonic_mean(const PeriodicField& D);

/// The 4-control-point periodic cubic spline with knots at x = 0, 1/3, 2/3, 1.
/// Requires control[0] == control[3] and all values in (0.1, 1); the result
/// is scan-checked for positivity.
PeriodicField build_periodic_spline(const std::array<double, 4>& control);

/// Field evaluating to f(x + omega).
PeriodicField phase_shift(const PeriodicField& f, double omega);

/// Scan-check that a field intended as a diffusion coefficient stays above
/// the positivity floor; throws DomainError otherwise.
void require_positive(const PeriodicField& D, int scan_n = 1024,
                      double floor = 1e-6);

double min_on_scan(const PeriodicField& f, int scan_n);
double max_on_scan(const PeriodicField& f, int scan_n);

}  // namespace qdiff
