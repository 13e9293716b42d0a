#pragma once

#include <functional>

namespace ratchetlab {

// Tail behaviour hint for semi-infinite integrals.
enum class DecayHint { EXP, GAUSS };

// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a,b].
// Stops when the summed error estimate is below max(abs_tol, rel_tol*|I|).
// Throws std::runtime_error if the panel budget is exhausted first.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-12, double rel_tol = 1e-12,
                          int max_panels = 8000);

// Integral of f over [lower, infinity). The cutoff is pushed out until the
// hinted tail bound drops below 1e-13; the tail estimate is added to the
// panel integral. Absolute tolerance 1e-10 by default.
double integrate_semiinfinite(const std::function<double(double)>& f, DecayHint hint,
                              double lower = 0.0, double abs_tol = 1e-10);

}  // namespace ratchetlab
