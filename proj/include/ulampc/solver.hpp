#pragma once

#include "ulampc/ulam.hpp"

namespace ulampc {

enum class SolveMethod {
  // Power iteration from the uniform density; when plain iterates stall
  // (eigenvalues on the unit circle), the running Cesaro averages are
  // checked as a fallback, since those always converge for a stochastic
  // matrix.
  PowerCesaro,
  // Dense QR solve of the stationarity equations plus the normalization
  // row.  Exact up to conditioning; preferred for cross-checking.
  DirectNullspace,
};

const char* solve_method_name(SolveMethod method);

struct SolveReport {
  DensityVector density;       // normalized: mass() == 1
  SolveMethod method = SolveMethod::PowerCesaro;
  long long iterations = 0;    // matrix applications (0 for the direct route)
  double residual_l1 = 0.0;    // ||P f - f||_1 of the returned density
  // max over cells of f_{i+1} - f_i; 0 for densities that are
  // non-increasing across the grid.
  double monotonicity_defect = 0.0;
};

// Computes the stationary density f = P f on the matrix's grid.
// PowerCesaro throws Error(NoConvergence) after max_iter applications;
// DirectNullspace ignores max_iter and throws Error(SingularSystem) for
// rank-deficient systems (e.g. several invariant components) and
// Error(NegativeDensity) if the solved vector dips below -tol.
SolveReport stationary_density(const UlamMatrix& matrix,
                               SolveMethod method = SolveMethod::PowerCesaro,
                               double tol = 1e-12, long long max_iter = 100000);

}  // namespace ulampc
