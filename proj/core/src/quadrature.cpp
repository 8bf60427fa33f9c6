#include "qdiff/quadrature.hpp"

#include <vector>

#include "qdiff/errors.hpp"

namespace qdiff {

namespace {
double simpson(const std::function<double(double)>& f, double a, double b,
               int panels) {
    const double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return sum * h / 3.0;
}
}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 int panels) {
    if (panels < 2 || panels % 2) throw DomainError("panels must be even >= 2");
    const double coarse = simpson(f, a, b, panels);
    const double fine = simpson(f, a, b, 2 * panels);
    return fine + (fine - coarse) / 15.0;
}

double integrate_period(const PeriodicField& f, int panels) {
    return integrate([&](double x) { return f(x); }, 0.0, f.period(), panels);
}

double mean_period(const PeriodicField& f, int panels) {
    return integrate_period(f, panels) / f.period();
}

}  // namespace qdiff
