#pragma once

#include <functional>
#include <vector>

namespace ulampc {

// Adaptive Simpson quadrature with Richardson extrapolation on [a, b].
// Throws Error(QuadratureFailure) when some subinterval still misses its
// error share at max_depth.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth = 30);

// Same, but splits [a, b] at the given breakpoints first (any order; only
// those strictly inside are used) and spreads tol across the pieces by
// length.  Every sample stays a small inset away from the cuts, so the
// integrand may jump at a breakpoint — each piece sees its one-sided
// limits.  Pieces narrower than ~4e-11 fall back to a midpoint rectangle.
double integrate_with_breakpoints(const std::function<double(double)>& f,
                                  double a, double b, double tol,
                                  const std::vector<double>& breakpoints,
                                  int max_depth = 30);

}  // namespace ulampc
