#pragma once

#include <functional>

namespace ringlens {

/// Golden-section search for the minimizer of a unimodal f on [lo, hi].
/// Returns the abscissa once the bracket shrinks below tol_x.
double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double tol_x, int max_iter = 200);

}  // namespace ringlens
