#pragma once

#include <functional>

#include "qdiff/field.hpp"

namespace qdiff {

/// Composite Simpson on `panels` uniform panels with one Richardson
/// refinement. Smooth periodic integrands over a full period converge much
/// faster than the formal O(h^4).
double integrate(const std::function<double(double)>& f, double a, double b,
                 int panels = 4096);

/// Integral of f over one period.
double integrate_period(const PeriodicField& f, int panels = 4096);

/// Mean of f over one period.
double mean_period(const PeriodicField& f, int panels = 4096);

}  // namespace qdiff
