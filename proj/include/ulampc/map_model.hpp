#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ulampc {

enum class ClassTag {
  FiniteBranches,
  CountableAccumulatingAtZero,
};

// One monotone branch of a piecewise map: defined on [left, right), mapping
// onto [0, image_sup).  `forward` and `derivative` are total on the closed
// branch interval; `inverse` (image value -> point) may be absent, in which
// case branch_inverse falls back to bracketed root finding.
struct Branch {
  double left = 0.0;
  double right = 1.0;
  std::function<double(double)> forward;
  std::function<double(double)> derivative;
  std::function<double(double)> inverse;
  double image_sup = 1.0;
  // Index of the generating family member for branch families, 0 otherwise.
  long long family_index = 0;
};

// Analytic access to the full countable family behind a materialized map:
// partition_point(m) = a_m and slope_at_left(m) = tau'(a_m) for every m >= 1,
// not just the materialized ones.  Needed for the tail sums in the
// Lasota-Yorke constants.
struct FamilyRule {
  std::function<double(long long)> partition_point;
  std::function<double(long long)> slope_at_left;
};

class MapSpec {
 public:
  // Branches must be sorted by left endpoint, tile an interval ending at 1,
  // and (for countable maps) leave the gap [0, floor) uncovered.
  MapSpec(std::vector<Branch> branches, ClassTag tag,
          std::optional<FamilyRule> family = std::nullopt,
          std::string name = {});

  double eval(double x) const;
  const Branch& branch_at(double x) const;

  const std::vector<Branch>& branches() const { return branches_; }
  ClassTag class_tag() const { return tag_; }
  const std::optional<FamilyRule>& family() const { return family_; }
  const std::string& name() const { return name_; }

  // Smallest materialized left endpoint; 0 exactly when the branches reach 0.
  double resolution_floor() const { return branches_.front().left; }

  // a_m of the decreasing partition sequence 1 = a_0 > a_1 > a_2 > ...
  // Family maps answer for every m >= 1 via the rule; finite maps answer for
  // m up to their branch count.
  double partition_point(long long m) const;

  // Largest m with a materialized branch [a_m, a_{m-1}).
  long long max_branch_index() const;

 private:
  std::vector<Branch> branches_;
  std::vector<double> lefts_;  // cached for dispatch
  ClassTag tag_;
  std::optional<FamilyRule> family_;
  std::string name_;
};

struct BranchCheck {
  long long index = 0;  // position in the branch list, 1-based from the left
  double left = 0.0;
  double right = 0.0;
  bool starts_at_zero = false;
  bool increasing = false;
  bool convex = false;
  bool positive_slope = false;
  std::string note;  // populated when evaluation itself failed

  bool ok() const { return starts_at_zero && increasing && convex && positive_slope; }
};

struct ValidationReport {
  std::vector<BranchCheck> branches;
  // Smallest N with sum_{m>N} 1/tau'(a_m) < 1, and the partial sums behind
  // it.  slope_sum approximates sum_{m>=1} 1/tau'(a_m) up to tail_index.
  long long cutoff = 0;
  double slope_sum = 0.0;
  double tail_after_cutoff = 0.0;
  long long tail_index = 0;
  double last_tail_term = 0.0;
  bool admissible = false;

  std::string summary() const;
};

ValidationReport validate(const MapSpec& map, int samples_per_branch = 64,
                          long long tail_index = 1000000, double tol = 1e-9);

// Constants of the Lasota-Yorke inequality for the n-th truncation:
//   ||P f||_inf <= (a_n + d1) ||f||_inf + d ||f||_1,
// giving the n- and k-uniform bound sup_bound on stationary densities.
struct LYConstants {
  long long cutoff = 0;      // N: smallest with the tail sum below 1
  double d1 = 0.0;           // sum_{m>N} 1/tau'(a_m)
  double c = 0.0;            // sum_{m>=1} 1/tau'(a_m)
  double d = 0.0;            // sum_{m=1..N} 1/(a_m tau'(a_m))
  double a_n = 0.0;
  double contraction = 0.0;  // a_n + d1
  double sup_bound = 0.0;    // d / (1 - contraction)
  long long tail_index = 0;
  double last_tail_term = 0.0;
};

// Throws Error(NotContracting) when a_n + d1 >= 1 (the bound is void there;
// pick a larger n).  Family maps sum the true infinite tail truncated at
// tail_index; finite maps sum their own partition points.
LYConstants ly_constants(const MapSpec& map, long long n,
                         long long tail_index = 1000000);

// Solves forward(x) = y on the branch interval.  Uses the closed-form
// inverse when present; otherwise bisection with a Newton polish (the polish
// only engages where the derivative is safely positive).  y outside
// [0, image_sup] (beyond tol slack) throws Error(NotInImage).
double branch_inverse(const Branch& branch, double y, double tol = 1e-12);

}  // namespace ulampc
