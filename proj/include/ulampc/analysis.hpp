#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ulampc/map_model.hpp"
#include "ulampc/solver.hpp"
#include "ulampc/ulam.hpp"

namespace ulampc {

// A reference density on [0,1].  Affine references carry their coefficients
// so L1 distances against step functions reduce to closed forms; everything
// else goes through quadrature.
struct ExactDensity {
  std::function<double(double)> fn;
  bool is_affine = false;
  double slope = 0.0;
  double intercept = 0.0;

  static ExactDensity affine(double slope, double intercept);
  static ExactDensity generic(std::function<double(double)> fn);

  double operator()(double x) const { return fn(x); }
};

// ||f - g||_1 over [0,1] for step functions on (possibly different) uniform
// grids.  Exact: integrates over the merged grid.
double l1_between(const DensityVector& f, const DensityVector& g);

// ||f - exact||_1.  Affine references are integrated in closed form (each
// cell splits at most once where the sign changes); generic references use
// adaptive quadrature with tolerance quad_tol.
double l1_vs_exact(const DensityVector& f, const ExactDensity& exact,
                   double quad_tol = 1e-9);

// ||Q^(k) P_tau f - f||_1 for a finite-branch map: the transfer operator is
// evaluated pointwise through the branch inverses, projected back onto f's
// grid (splitting at the images of the cell boundaries, where P_tau f
// jumps), and compared.
double fp_residual(const MapSpec& map, const DensityVector& f,
                   double quad_tol = 1e-9);

struct SweepRow {
  long long n = 0;
  int k = 0;
  bool ok = false;
  double error_l1 = 0.0;     // NaN when there is nothing to compare against
  double residual_l1 = 0.0;
  long long iterations = 0;
  double runtime_ms = 0.0;   // NaN unless timings were requested
  std::string status;        // "ok" or the error code name
  std::string message;       // error detail when !ok
};

struct SweepOptions {
  SolveMethod method = SolveMethod::PowerCesaro;
  double tol = 1e-12;
  long long max_iter = 100000;
  double matrix_tol = 1e-12;
  // Runtimes are only measured on request so identical runs produce
  // byte-identical tables.
  bool measure_time = false;
};

// Truncation/refinement study over a countable base map: for every n in
// n_list and k in k_list, solves the truncated Ulam problem and reports the
// L1 error against `exact` when given, else against the previous successful
// row's density.  Rows that fail carry their error code and message; the
// sweep continues.
std::vector<SweepRow> sweep(const MapSpec& base,
                            const std::optional<ExactDensity>& exact,
                            std::span<const long long> n_list,
                            std::span<const int> k_list,
                            const SweepOptions& options = {});

}  // namespace ulampc
