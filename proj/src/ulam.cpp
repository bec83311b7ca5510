#include "ulampc/ulam.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <thread>

#include "ulampc/error.hpp"
#include "ulampc/numfmt.hpp"
#include "ulampc/quadrature.hpp"

namespace ulampc {

// ---------------------------------------------------------------------------
// PartitionGrid / DensityVector

int PartitionGrid::cell_of(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    fail(ErrorCode::OutOfDomain, "point " + format_double(x) + " is outside [0,1]");
  }
  int i = static_cast<int>(x * k) + 1;
  return std::min(i, k);
}

DensityVector DensityVector::uniform(int k) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "k must be >= 1");
  return DensityVector{k, std::vector<double>(static_cast<std::size_t>(k), 1.0)};
}

double DensityVector::value_at(double x) const {
  PartitionGrid grid{k};
  return values[static_cast<std::size_t>(grid.cell_of(x)) - 1];
}

double DensityVector::mass() const {
  long double sum = 0.0L;
  for (double v : values) sum += v;
  return static_cast<double>(sum / k);
}

void DensityVector::normalize() {
  double m = mass();
  if (!(m > 0.0)) {
    fail(ErrorCode::InvalidArgument,
         "cannot normalize a density with mass " + format_double(m));
  }
  for (double& v : values) v /= m;
}

// ---------------------------------------------------------------------------
// UlamMatrix

UlamMatrix UlamMatrix::from_triplets(int k, std::vector<Triplet> triplets,
                                     double assembly_tol) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "k must be >= 1");
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= k || t.col < 0 || t.col >= k) {
      fail(ErrorCode::IndexOutOfRange,
           "triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
               ") outside a " + std::to_string(k) + "x" + std::to_string(k) +
               " matrix");
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });
  UlamMatrix m;
  m.k_ = k;
  m.assembly_tol_ = assembly_tol;
  m.row_ptr_.assign(static_cast<std::size_t>(k) + 1, 0);
  m.values_.reserve(triplets.size());
  m.cols_.reserve(triplets.size());

  std::size_t pos = 0;
  long double max_defect = 0.0L;
  for (int row = 0; row < k; ++row) {
    m.row_ptr_[static_cast<std::size_t>(row)] = m.values_.size();
    long double row_sum = 0.0L;
    while (pos < triplets.size() && triplets[pos].row == row) {
      int col = triplets[pos].col;
      long double acc = 0.0L;
      while (pos < triplets.size() && triplets[pos].row == row &&
             triplets[pos].col == col) {
        acc += triplets[pos].value;
        ++pos;
      }
      double v = static_cast<double>(acc);
      if (v != 0.0) {
        m.cols_.push_back(col);
        m.values_.push_back(v);
        row_sum += v;
      }
    }
    double defect = static_cast<double>(std::fabs(row_sum - 1.0L));
    if (defect > std::max(1e-6, 10.0 * assembly_tol * k)) {
      fail(ErrorCode::InvalidArgument,
           "row " + std::to_string(row + 1) + " sums to " +
               format_double(static_cast<double>(row_sum)) +
               "; the matrix is not row-stochastic");
    }
    max_defect = std::max(max_defect, static_cast<long double>(defect));
  }
  m.row_ptr_[static_cast<std::size_t>(k)] = m.values_.size();
  m.row_defect_ = static_cast<double>(max_defect);
  return m;
}

double UlamMatrix::entry(int row, int col) const {
  if (row < 0 || row >= k_ || col < 0 || col >= k_) {
    fail(ErrorCode::IndexOutOfRange,
         "entry (" + std::to_string(row) + ", " + std::to_string(col) +
             ") outside a " + std::to_string(k_) + "x" + std::to_string(k_) +
             " matrix");
  }
  auto begin = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[static_cast<std::size_t>(row)]);
  auto end = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[static_cast<std::size_t>(row) + 1]);
  auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_.begin())];
}

std::span<const int> UlamMatrix::row_cols(int row) const {
  if (row < 0 || row >= k_) {
    fail(ErrorCode::IndexOutOfRange, "row " + std::to_string(row) + " out of range");
  }
  std::size_t b = row_ptr_[static_cast<std::size_t>(row)];
  std::size_t e = row_ptr_[static_cast<std::size_t>(row) + 1];
  return {cols_.data() + b, e - b};
}

std::span<const double> UlamMatrix::row_values(int row) const {
  if (row < 0 || row >= k_) {
    fail(ErrorCode::IndexOutOfRange, "row " + std::to_string(row) + " out of range");
  }
  std::size_t b = row_ptr_[static_cast<std::size_t>(row)];
  std::size_t e = row_ptr_[static_cast<std::size_t>(row) + 1];
  return {values_.data() + b, e - b};
}

void UlamMatrix::normalize_rows() {
  for (int row = 0; row < k_; ++row) {
    std::size_t b = row_ptr_[static_cast<std::size_t>(row)];
    std::size_t e = row_ptr_[static_cast<std::size_t>(row) + 1];
    long double sum = 0.0L;
    for (std::size_t idx = b; idx < e; ++idx) sum += values_[idx];
    if (sum <= 0.0L) continue;
    double scale = static_cast<double>(1.0L / sum);
    for (std::size_t idx = b; idx < e; ++idx) values_[idx] *= scale;
  }
}

// ---------------------------------------------------------------------------
// Assembly

namespace {

int worker_count(std::size_t jobs) {
  int n = 0;
  if (const char* env = std::getenv("ULAM_THREADS")) {
    n = std::atoi(env);
  }
  if (n < 1) {
    n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
  }
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n),
                                                std::max<std::size_t>(jobs, 1)));
}

// Triplets of one branch: the branch interval is cut at the preimages of the
// cell boundaries t/k, so piece t (mapping into column t) runs between
// consecutive preimages; each piece's length is then split over the rows it
// crosses.  Everything is an interval-length ratio, exact up to the
// inversion tolerance.
void branch_triplets(const Branch& b, int k, double tol,
                     std::vector<UlamMatrix::Triplet>& out) {
  double ysup = std::min(b.image_sup, 1.0);
  double x_end = b.image_sup <= 1.0 ? b.right : branch_inverse(b, 1.0, tol);

  std::vector<double> xs(static_cast<std::size_t>(k) + 1);
  xs[0] = b.left;
  for (int t = 1; t <= k; ++t) {
    double y = static_cast<double>(t) / k;
    double x = y >= ysup ? x_end : branch_inverse(b, y, tol);
    xs[static_cast<std::size_t>(t)] = std::max(x, xs[static_cast<std::size_t>(t) - 1]);
  }
  xs[static_cast<std::size_t>(k)] = std::max(x_end, xs[static_cast<std::size_t>(k)]);

  for (int t = 1; t <= k; ++t) {
    double lo = xs[static_cast<std::size_t>(t) - 1];
    double hi = xs[static_cast<std::size_t>(t)];
    if (!(hi > lo)) continue;
    int col = t - 1;
    int i0 = std::min(static_cast<int>(lo * k), k - 1);
    int i1 = std::min(static_cast<int>(hi * k), k - 1);
    for (int i = i0; i <= i1; ++i) {
      double cell_l = static_cast<double>(i) / k;
      double cell_r = static_cast<double>(i + 1) / k;
      double overlap = std::min(hi, cell_r) - std::max(lo, cell_l);
      if (overlap > 0.0) {
        out.push_back({i, col, overlap * k});
      }
    }
  }
}

}  // namespace

UlamMatrix ulam_matrix(const MapSpec& map, int k, double tol,
                       bool renormalize_rows) {
  if (map.class_tag() != ClassTag::FiniteBranches) {
    fail(ErrorCode::InvalidArgument,
         "matrix assembly requires a finite-branch map; truncate first");
  }
  if (k < 1) fail(ErrorCode::InvalidArgument, "k must be >= 1");
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tol must be positive");

  const auto& branches = map.branches();
  int workers = worker_count(branches.size());

  std::vector<std::vector<UlamMatrix::Triplet>> shards(
      static_cast<std::size_t>(workers));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));

  auto run_shard = [&](int w) {
    try {
      std::size_t begin = branches.size() * static_cast<std::size_t>(w) /
                          static_cast<std::size_t>(workers);
      std::size_t end = branches.size() * (static_cast<std::size_t>(w) + 1) /
                        static_cast<std::size_t>(workers);
      for (std::size_t j = begin; j < end; ++j) {
        branch_triplets(branches[j], k, tol, shards[static_cast<std::size_t>(w)]);
      }
    } catch (...) {
      errors[static_cast<std::size_t>(w)] = std::current_exception();
    }
  };

  if (workers == 1) {
    run_shard(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(run_shard, w);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Concatenating shards in branch order makes the triplet sequence (and the
  // stable sort downstream) independent of the worker count.
  std::vector<UlamMatrix::Triplet> triplets;
  std::size_t total = 0;
  for (const auto& s : shards) total += s.size();
  triplets.reserve(total);
  for (const auto& s : shards) {
    triplets.insert(triplets.end(), s.begin(), s.end());
  }

  UlamMatrix m = UlamMatrix::from_triplets(k, std::move(triplets), tol);
  if (m.max_row_sum_defect() > 1e-8) {
    fail(ErrorCode::InvalidArgument,
         "assembled rows miss full mass by " +
             format_double(m.max_row_sum_defect()) +
             "; the branch data is inconsistent");
  }
  if (renormalize_rows) m.normalize_rows();
  return m;
}

// ---------------------------------------------------------------------------
// Operator action and projections

DensityVector apply_operator(const UlamMatrix& matrix, const DensityVector& f) {
  if (matrix.k() != f.k) {
    fail(ErrorCode::DimensionMismatch,
         "matrix is " + std::to_string(matrix.k()) + "-cell but density is " +
             std::to_string(f.k) + "-cell");
  }
  DensityVector out{f.k, std::vector<double>(static_cast<std::size_t>(f.k), 0.0)};
  for (int i = 0; i < matrix.k(); ++i) {
    double fi = f.values[static_cast<std::size_t>(i)];
    if (fi == 0.0) continue;
    auto cols = matrix.row_cols(i);
    auto vals = matrix.row_values(i);
    for (std::size_t idx = 0; idx < cols.size(); ++idx) {
      out.values[static_cast<std::size_t>(cols[idx])] += fi * vals[idx];
    }
  }
  return out;
}

DensityVector project_density(const std::function<double(double)>& f, int k,
                              double quad_tol) {
  return project_density(f, k, quad_tol, {});
}

DensityVector project_density(const std::function<double(double)>& f, int k,
                              double quad_tol,
                              const std::vector<double>& breakpoints) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "k must be >= 1");
  if (!(quad_tol > 0.0)) fail(ErrorCode::InvalidArgument, "quad_tol must be positive");
  DensityVector out{k, std::vector<double>(static_cast<std::size_t>(k), 0.0)};
  PartitionGrid grid{k};
  auto from = breakpoints.begin();
  for (int i = 1; i <= k; ++i) {
    double l = grid.left(i);
    double r = grid.right(i);
    auto lo = std::lower_bound(from, breakpoints.end(), l);
    auto hi = std::upper_bound(lo, breakpoints.end(), r);
    from = lo;
    std::vector<double> inner(lo, hi);
    double integral = integrate_with_breakpoints(f, l, r, quad_tol / k, inner);
    out.values[static_cast<std::size_t>(i) - 1] = integral * k;
  }
  return out;
}

DensityVector project_density(const DensityVector& f, int k) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "k must be >= 1");
  DensityVector out{k, std::vector<double>(static_cast<std::size_t>(k), 0.0)};
  // Exact piecewise-constant integration over the merged grid.  j tracks the
  // first source cell that can still overlap the current target cell.
  std::size_t j = 0;
  for (int i = 0; i < k; ++i) {
    double l = static_cast<double>(i) / k;
    double r = static_cast<double>(i + 1) / k;
    long double acc = 0.0L;
    while (j < f.values.size()) {
      double sl = static_cast<double>(j) / f.k;
      double sr = static_cast<double>(j + 1) / f.k;
      if (sl >= r) break;
      double overlap = std::min(r, sr) - std::max(l, sl);
      if (overlap > 0.0) acc += static_cast<long double>(f.values[j]) * overlap;
      if (sr <= r) {
        ++j;  // fully consumed by this target cell
      } else {
        break;  // straddles the boundary; the next target sees it again
      }
    }
    out.values[static_cast<std::size_t>(i)] = static_cast<double>(acc) * k;
  }
  return out;
}

}  // namespace ulampc
