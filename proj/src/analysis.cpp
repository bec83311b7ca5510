#include "ulampc/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "ulampc/error.hpp"
#include "ulampc/quadrature.hpp"
#include "ulampc/truncation.hpp"

namespace ulampc {

ExactDensity ExactDensity::affine(double slope, double intercept) {
  ExactDensity d;
  d.is_affine = true;
  d.slope = slope;
  d.intercept = intercept;
  d.fn = [slope, intercept](double x) { return intercept + slope * x; };
  return d;
}

ExactDensity ExactDensity::generic(std::function<double(double)> fn) {
  ExactDensity d;
  d.fn = std::move(fn);
  return d;
}

double l1_between(const DensityVector& f, const DensityVector& g) {
  if (f.k < 1 || g.k < 1 || f.values.empty() || g.values.empty()) {
    fail(ErrorCode::InvalidArgument, "l1_between needs non-empty densities");
  }
  long double total = 0.0L;
  std::size_t i = 0;
  std::size_t j = 0;
  double pos = 0.0;
  while (i < f.values.size() && j < g.values.size()) {
    double r1 = static_cast<double>(i + 1) / f.k;
    double r2 = static_cast<double>(j + 1) / g.k;
    double r = std::min(r1, r2);
    total += std::fabs(static_cast<long double>(f.values[i]) - g.values[j]) *
             (r - pos);
    pos = r;
    if (r1 <= r) ++i;
    if (r2 <= r) ++j;
  }
  return static_cast<double>(total);
}

namespace {

// Integral of |d0 + (d1-d0) t| (b-a) dt over t in [0,1]: the linear deviation
// between cell endpoints, split at its root when the sign changes.
double abs_linear_integral(double d0, double d1, double width) {
  if (d0 * d1 >= 0.0) {
    return 0.5 * std::fabs(d0 + d1) * width;
  }
  double t = d0 / (d0 - d1);  // in (0,1)
  return 0.5 * (std::fabs(d0) * t + std::fabs(d1) * (1.0 - t)) * width;
}

}  // namespace

double l1_vs_exact(const DensityVector& f, const ExactDensity& exact,
                   double quad_tol) {
  if (f.k < 1 || f.values.empty()) {
    fail(ErrorCode::InvalidArgument, "l1_vs_exact needs a non-empty density");
  }
  if (!exact.fn && !exact.is_affine) {
    fail(ErrorCode::InvalidArgument, "reference density has no function");
  }
  long double total = 0.0L;
  for (int i = 0; i < f.k; ++i) {
    double a = static_cast<double>(i) / f.k;
    double b = static_cast<double>(i + 1) / f.k;
    double v = f.values[static_cast<std::size_t>(i)];
    if (exact.is_affine) {
      double d0 = exact.intercept + exact.slope * a - v;
      double d1 = exact.intercept + exact.slope * b - v;
      total += abs_linear_integral(d0, d1, b - a);
    } else {
      auto integrand = [&](double x) { return std::fabs(exact.fn(x) - v); };
      total += integrate(integrand, a, b, quad_tol / f.k);
    }
  }
  return static_cast<double>(total);
}

double fp_residual(const MapSpec& map, const DensityVector& f,
                   double quad_tol) {
  if (map.class_tag() != ClassTag::FiniteBranches) {
    fail(ErrorCode::InvalidArgument,
         "fp_residual needs a finite-branch map; truncate first");
  }
  if (f.k < 1 || f.values.empty()) {
    fail(ErrorCode::InvalidArgument, "fp_residual needs a non-empty density");
  }
  int k = f.k;

  // P f jumps where a branch inverse crosses a cell boundary of f, i.e. at
  // the forward images of grid points inside each branch, and where a branch
  // image ends.
  std::vector<double> breaks;
  for (const Branch& b : map.branches()) {
    int t0 = static_cast<int>(std::ceil(b.left * k));
    for (int t = std::max(t0, 1); t < k; ++t) {
      double z = static_cast<double>(t) / k;
      if (z <= b.left || z >= b.right) continue;
      double y = b.forward(z);
      if (y > 0.0 && y < 1.0) breaks.push_back(y);
    }
    if (b.image_sup < 1.0 && b.image_sup > 0.0) breaks.push_back(b.image_sup);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) { return b - a < 1e-14; }),
               breaks.end());

  auto pf = [&](double y) {
    double sum = 0.0;
    for (const Branch& b : map.branches()) {
      if (y > b.image_sup) continue;
      double z = branch_inverse(b, y, 1e-13);
      double d = b.derivative(z);
      sum += f.value_at(z) / d;
    }
    return sum;
  };

  DensityVector projected = project_density(pf, k, quad_tol, breaks);
  return l1_between(projected, f);
}

std::vector<SweepRow> sweep(const MapSpec& base,
                            const std::optional<ExactDensity>& exact,
                            std::span<const long long> n_list,
                            std::span<const int> k_list,
                            const SweepOptions& options) {
  if (n_list.empty() || k_list.empty()) {
    fail(ErrorCode::InvalidArgument, "sweep needs at least one n and one k");
  }
  std::vector<SweepRow> rows;
  rows.reserve(n_list.size() * k_list.size());
  std::optional<DensityVector> previous;

  for (long long n : n_list) {
    for (int k : k_list) {
      SweepRow row;
      row.n = n;
      row.k = k;
      row.error_l1 = std::numeric_limits<double>::quiet_NaN();
      row.runtime_ms = std::numeric_limits<double>::quiet_NaN();
      auto t0 = std::chrono::steady_clock::now();
      try {
        TruncatedMap tm = truncate(base, n);
        UlamMatrix m = ulam_matrix(tm.spec, k, options.matrix_tol);
        SolveReport rep = stationary_density(m, options.method, options.tol,
                                             options.max_iter);
        row.residual_l1 = rep.residual_l1;
        row.iterations = rep.iterations;
        if (exact) {
          row.error_l1 = l1_vs_exact(rep.density, *exact);
        } else if (previous) {
          row.error_l1 = l1_between(rep.density, *previous);
        }
        previous = std::move(rep.density);
        row.ok = true;
        row.status = "ok";
      } catch (const Error& e) {
        row.ok = false;
        row.status = error_code_name(e.code());
        row.message = e.what();
      }
      if (options.measure_time) {
        auto t1 = std::chrono::steady_clock::now();
        row.runtime_ms =
            std::chrono::duration<double, std::milli>(t1 - t0).count();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace ulampc
