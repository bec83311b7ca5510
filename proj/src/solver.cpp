#include "ulampc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "ulampc/error.hpp"
#include "ulampc/numfmt.hpp"

namespace ulampc {

const char* solve_method_name(SolveMethod method) {
  switch (method) {
    case SolveMethod::PowerCesaro: return "power";
    case SolveMethod::DirectNullspace: return "direct";
  }
  return "unknown";
}

namespace {

std::vector<double> apply_rows(const UlamMatrix& m, const std::vector<double>& f) {
  std::vector<double> out(f.size(), 0.0);
  for (int i = 0; i < m.k(); ++i) {
    double fi = f[static_cast<std::size_t>(i)];
    if (fi == 0.0) continue;
    auto cols = m.row_cols(i);
    auto vals = m.row_values(i);
    for (std::size_t idx = 0; idx < cols.size(); ++idx) {
      out[static_cast<std::size_t>(cols[idx])] += fi * vals[idx];
    }
  }
  return out;
}

// L1 norm of the step function with these cell heights.
double l1_norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
  long double sum = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::fabs(a[i] - b[i]);
  return static_cast<double>(sum / a.size());
}

SolveReport finalize(const UlamMatrix& m, std::vector<double> heights,
                     SolveMethod method, long long iterations) {
  DensityVector f{m.k(), std::move(heights)};
  f.normalize();
  std::vector<double> pf = apply_rows(m, f.values);
  SolveReport report;
  report.method = method;
  report.iterations = iterations;
  report.residual_l1 = l1_norm_diff(pf, f.values);
  double defect = 0.0;
  for (std::size_t i = 0; i + 1 < f.values.size(); ++i) {
    defect = std::max(defect, f.values[i + 1] - f.values[i]);
  }
  report.monotonicity_defect = std::max(defect, 0.0);
  report.density = std::move(f);
  return report;
}

SolveReport solve_power(const UlamMatrix& m, double tol, long long max_iter) {
  std::size_t k = static_cast<std::size_t>(m.k());
  std::vector<double> f(k, 1.0);
  std::vector<double> cesaro(k, 0.0);
  double best_residual = std::numeric_limits<double>::infinity();
  long long steps = 0;

  for (long long iter = 1; iter <= max_iter; ++iter) {
    std::vector<double> g = apply_rows(m, f);
    double res = l1_norm_diff(g, f);
    for (std::size_t i = 0; i < k; ++i) cesaro[i] += g[i];
    ++steps;
    if (res <= tol) {
      return finalize(m, std::move(g), SolveMethod::PowerCesaro, iter);
    }
    best_residual = std::min(best_residual, res);

    // Plain iterates can orbit forever when the matrix has peripheral
    // spectrum beyond the eigenvalue 1; the Cesaro averages still settle.
    if (iter % 128 == 0) {
      std::vector<double> avg(k);
      for (std::size_t i = 0; i < k; ++i) avg[i] = cesaro[i] / static_cast<double>(steps);
      std::vector<double> pavg = apply_rows(m, avg);
      double avg_res = l1_norm_diff(pavg, avg);
      if (avg_res <= tol) {
        return finalize(m, std::move(avg), SolveMethod::PowerCesaro, iter);
      }
      best_residual = std::min(best_residual, avg_res);
    }
    f = std::move(g);
  }
  fail(ErrorCode::NoConvergence,
       "power iteration missed tolerance " + format_double(tol) + " after " +
           std::to_string(max_iter) + " steps (best residual " +
           format_double(best_residual) + ")");
}

SolveReport solve_direct(const UlamMatrix& m, double tol) {
  int k = m.k();
  // Stationarity f M = f written column-wise, i.e. (M^T - I) f = 0, with the
  // height normalization sum(f)/k = 1 appended as an extra equation.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k + 1, k);
  for (int i = 0; i < k; ++i) {
    auto cols = m.row_cols(i);
    auto vals = m.row_values(i);
    for (std::size_t idx = 0; idx < cols.size(); ++idx) {
      a(cols[idx], i) += vals[idx];
    }
    a(i, i) -= 1.0;
  }
  for (int j = 0; j < k; ++j) a(k, j) = 1.0 / k;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs(k) = 1.0;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < k) {
    fail(ErrorCode::SingularSystem,
         "stationary system has rank " + std::to_string(qr.rank()) + " < " +
             std::to_string(k) + "; the fixed density is not unique");
  }
  Eigen::VectorXd x = qr.solve(rhs);

  double min_entry = x.minCoeff();
  if (min_entry < -tol) {
    fail(ErrorCode::NegativeDensity,
         "solved density dips to " + format_double(min_entry) +
             "; not a density at tolerance " + format_double(tol));
  }
  std::vector<double> heights(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) heights[static_cast<std::size_t>(i)] = std::max(x(i), 0.0);
  return finalize(m, std::move(heights), SolveMethod::DirectNullspace, 0);
}

}  // namespace

SolveReport stationary_density(const UlamMatrix& matrix, SolveMethod method,
                               double tol, long long max_iter) {
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tol must be positive");
  if (method == SolveMethod::PowerCesaro) {
    if (max_iter < 1) fail(ErrorCode::InvalidArgument, "max_iter must be >= 1");
    return solve_power(matrix, tol, max_iter);
  }
  return solve_direct(matrix, tol);  // max_iter is not used by this route
}

}  // namespace ulampc
