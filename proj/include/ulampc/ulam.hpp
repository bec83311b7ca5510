#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ulampc/map_model.hpp"

namespace ulampc {

// The uniform partition of [0,1] into k cells J_i = [(i-1)/k, i/k),
// 1-based like the matrix rows; the last cell is closed at 1.
struct PartitionGrid {
  int k = 1;

  double left(int i) const { return static_cast<double>(i - 1) / k; }
  double right(int i) const { return static_cast<double>(i) / k; }

  // Cell containing x in [0,1]; x = 1 belongs to cell k.
  int cell_of(double x) const;
};

// A step function on the k-cell grid: value values[i-1] on cell J_i.
// Stationary densities are normalized so the heights average to 1,
// i.e. sum(values) / k = 1 and the function integrates to 1.
struct DensityVector {
  int k = 0;
  std::vector<double> values;

  static DensityVector uniform(int k);

  double value_at(double x) const;  // throws OutOfDomain outside [0,1]
  double mass() const;              // sum(values) / k
  void normalize();                 // rescale so mass() == 1
};

// Row-major sparse Ulam matrix: entry(i, j) is the fraction of cell J_{i+1}
// (0-based i) that the map sends into cell J_{j+1}.  Rows sum to 1 up to
// assembly roundoff; the raw defect observed at assembly time is kept even
// if rows are renormalized afterwards.
class UlamMatrix {
 public:
  struct Triplet {
    int row;
    int col;
    double value;
  };

  // Merges duplicate (row, col) pairs and drops exact zeros.  Rejects
  // out-of-range indices and rows whose sum strays from 1 by more than
  // max(1e-6, 10 * k * assembly_tol): the matrix must be row-stochastic.
  static UlamMatrix from_triplets(int k, std::vector<Triplet> triplets,
                                  double assembly_tol);

  int k() const { return k_; }
  std::size_t nnz() const { return values_.size(); }
  double assembly_tol() const { return assembly_tol_; }
  double max_row_sum_defect() const { return row_defect_; }

  double entry(int row, int col) const;  // 0-based
  std::span<const int> row_cols(int row) const;
  std::span<const double> row_values(int row) const;

  // Rescales every row to sum exactly 1; max_row_sum_defect() keeps
  // reporting the defect seen before rescaling.
  void normalize_rows();

 private:
  int k_ = 0;
  double assembly_tol_ = 0.0;
  double row_defect_ = 0.0;
  std::vector<double> values_;
  std::vector<int> cols_;
  std::vector<std::size_t> row_ptr_;
};

// Assembles the Ulam matrix of a finite-branch map by splitting each branch
// at the preimages of the cell boundaries, so every entry is an exact
// interval-length ratio (no quadrature).  Work is sharded over branches;
// ULAM_THREADS caps the worker count, and the result is identical for any
// worker count.  tol is the branch-inversion tolerance.
UlamMatrix ulam_matrix(const MapSpec& map, int k, double tol = 1e-12,
                       bool renormalize_rows = false);

// Push-forward of a density by the matrix: out_j = sum_i f_i M_ij.
DensityVector apply_operator(const UlamMatrix& matrix, const DensityVector& f);

// L1-orthogonal projection onto the k-cell step functions: cell averages.
DensityVector project_density(const std::function<double(double)>& f, int k,
                              double quad_tol = 1e-10);
// Same, for an integrand with known kinks (sorted breakpoints).
DensityVector project_density(const std::function<double(double)>& f, int k,
                              double quad_tol,
                              const std::vector<double>& breakpoints);
// Exact projection of a step function onto a coarser or finer grid.
DensityVector project_density(const DensityVector& f, int k);

}  // namespace ulampc
