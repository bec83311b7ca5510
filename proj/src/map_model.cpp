#include "ulampc/map_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ulampc/error.hpp"
#include "ulampc/numfmt.hpp"

namespace ulampc {

namespace {

constexpr double kTileTol = 1e-12;

}  // namespace

MapSpec::MapSpec(std::vector<Branch> branches, ClassTag tag,
                 std::optional<FamilyRule> family, std::string name)
    : branches_(std::move(branches)),
      tag_(tag),
      family_(std::move(family)),
      name_(std::move(name)) {
  if (branches_.empty()) {
    fail(ErrorCode::InvalidArgument, "map needs at least one branch");
  }
  for (std::size_t j = 0; j < branches_.size(); ++j) {
    const Branch& b = branches_[j];
    if (!b.forward || !b.derivative) {
      fail(ErrorCode::InvalidArgument,
           "branch " + std::to_string(j + 1) + " is missing forward or derivative");
    }
    if (!(b.left < b.right)) {
      fail(ErrorCode::InvalidArgument,
           "branch " + std::to_string(j + 1) + " has empty interval [" +
               format_double(b.left) + ", " + format_double(b.right) + ")");
    }
    if (j + 1 < branches_.size() &&
        std::fabs(b.right - branches_[j + 1].left) > kTileTol) {
      fail(ErrorCode::InvalidArgument,
           "branch intervals do not tile: gap between " + format_double(b.right) +
               " and " + format_double(branches_[j + 1].left));
    }
  }
  if (std::fabs(branches_.back().right - 1.0) > kTileTol) {
    fail(ErrorCode::InvalidArgument,
         "branch intervals must end at 1, got " + format_double(branches_.back().right));
  }
  branches_.back().right = 1.0;
  if (tag_ == ClassTag::FiniteBranches) {
    if (branches_.front().left != 0.0) {
      fail(ErrorCode::InvalidArgument,
           "a finite-branch map must cover [0,1]; first branch starts at " +
               format_double(branches_.front().left));
    }
  } else {
    if (!(branches_.front().left > 0.0)) {
      fail(ErrorCode::InvalidArgument,
           "a countable map's materialized branches must stay above 0");
    }
    if (!family_) {
      fail(ErrorCode::InvalidArgument,
           "a countable map needs a family rule for its tail");
    }
  }
  lefts_.reserve(branches_.size());
  for (const Branch& b : branches_) lefts_.push_back(b.left);
}

const Branch& MapSpec::branch_at(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    fail(ErrorCode::OutOfDomain, "point " + format_double(x) + " is outside [0,1]");
  }
  if (x < lefts_.front()) {
    fail(ErrorCode::BelowResolutionFloor,
         "point " + format_double(x) + " lies below the resolution floor " +
             format_double(lefts_.front()));
  }
  auto it = std::upper_bound(lefts_.begin(), lefts_.end(), x);
  return branches_[static_cast<std::size_t>(it - lefts_.begin()) - 1];
}

double MapSpec::eval(double x) const {
  const Branch& b = branch_at(x);
  double y = b.forward(x);
  if (!std::isfinite(y)) {
    fail(ErrorCode::ExprDomain,
         "branch formula produced a non-finite value at x = " + format_double(x));
  }
  // Guard against endpoint roundoff pushing the image a few ulps outside.
  return std::min(std::max(y, 0.0), 1.0);
}

double MapSpec::partition_point(long long m) const {
  if (m < 0) fail(ErrorCode::IndexOutOfRange, "partition index must be >= 0");
  if (m == 0) return 1.0;
  if (family_) {
    double a = family_->partition_point(m);
    if (!(a > 0.0 && a < 1.0)) {
      fail(ErrorCode::InvalidArgument,
           "family partition rule gave a_" + std::to_string(m) + " = " +
               format_double(a) + " outside (0,1)");
    }
    return a;
  }
  long long count = static_cast<long long>(branches_.size());
  if (m > count) {
    fail(ErrorCode::IndexOutOfRange,
         "partition index " + std::to_string(m) + " exceeds branch count " +
             std::to_string(count));
  }
  return branches_[static_cast<std::size_t>(count - m)].left;
}

long long MapSpec::max_branch_index() const {
  if (tag_ == ClassTag::CountableAccumulatingAtZero) {
    return branches_.front().family_index;
  }
  return static_cast<long long>(branches_.size());
}

// ---------------------------------------------------------------------------
// validate

namespace {

// Slope terms 1/tau'(a_m) of the decreasing partition sequence.  For family
// maps the rule answers every m; finite maps expose their own points, with
// the innermost branch supplying the slope at its left endpoint.
struct SlopeTerms {
  const MapSpec& map;
  long long count;  // number of terms available

  double term(long long m) const {
    if (map.family()) {
      double slope = map.family()->slope_at_left(m);
      if (!(slope > 0.0)) {
        fail(ErrorCode::InvalidArgument,
             "family slope rule gave tau'(a_" + std::to_string(m) + ") = " +
                 format_double(slope) + " <= 0");
      }
      return 1.0 / slope;
    }
    const auto& branches = map.branches();
    long long n = static_cast<long long>(branches.size());
    const Branch& b = branches[static_cast<std::size_t>(n - m)];
    double slope = b.derivative(b.left);
    if (!(slope > 0.0)) {
      fail(ErrorCode::InvalidArgument,
           "derivative at partition point " + format_double(b.left) + " is " +
               format_double(slope) + " <= 0");
    }
    return 1.0 / slope;
  }
};

SlopeTerms slope_terms(const MapSpec& map, long long tail_index) {
  long long count = map.family() ? tail_index
                                 : static_cast<long long>(map.branches().size());
  return SlopeTerms{map, count};
}

struct TailSums {
  long long cutoff = 0;
  double total = 0.0;     // sum over all available terms
  double after = 0.0;     // sum of terms beyond the cutoff
  double last_term = 0.0;
};

TailSums tail_sums(const SlopeTerms& terms) {
  long double total = 0.0L;
  for (long long m = 1; m <= terms.count; ++m) total += terms.term(m);
  long double prefix = 0.0L;
  long long cutoff = 0;
  if (total >= 1.0L) {
    for (long long m = 1; m <= terms.count; ++m) {
      prefix += terms.term(m);
      if (total - prefix < 1.0L) {
        cutoff = m;
        break;
      }
    }
  }
  TailSums out;
  out.cutoff = cutoff;
  out.total = static_cast<double>(total);
  out.after = static_cast<double>(total - prefix);
  out.last_term = terms.count > 0 ? terms.term(terms.count) : 0.0;
  return out;
}

}  // namespace

ValidationReport validate(const MapSpec& map, int samples_per_branch,
                          long long tail_index, double tol) {
  if (samples_per_branch < 3) {
    fail(ErrorCode::InvalidArgument, "samples_per_branch must be >= 3");
  }
  if (tail_index < 1) {
    fail(ErrorCode::InvalidArgument, "tail_index must be >= 1");
  }
  ValidationReport report;
  report.tail_index = map.family() ? tail_index
                                   : static_cast<long long>(map.branches().size());

  for (std::size_t j = 0; j < map.branches().size(); ++j) {
    const Branch& b = map.branches()[j];
    BranchCheck check;
    check.index = b.family_index != 0 ? b.family_index
                                      : static_cast<long long>(j + 1);
    check.left = b.left;
    check.right = b.right;
    int s = samples_per_branch;
    double width = b.right - b.left;
    // Stop a hair short of the right endpoint: closed forms exact there in
    // real arithmetic often dip out of domain by an ulp in floating point.
    double span = width * (1.0 - 1e-12);
    std::vector<double> xs(static_cast<std::size_t>(s));
    std::vector<double> ys(static_cast<std::size_t>(s));
    xs[0] = b.left;
    for (int t = 1; t < s; ++t) {
      xs[static_cast<std::size_t>(t)] = b.left + span * t / (s - 1);
    }
    try {
      for (int t = 0; t < s; ++t) {
        double y = b.forward(xs[static_cast<std::size_t>(t)]);
        if (!std::isfinite(y)) {
          fail(ErrorCode::ExprDomain, "non-finite branch value at x = " +
                                          format_double(xs[static_cast<std::size_t>(t)]));
        }
        ys[static_cast<std::size_t>(t)] = y;
      }
      check.starts_at_zero = std::fabs(ys[0]) <= tol;
      check.increasing = true;
      for (int t = 0; t + 1 < s; ++t) {
        if (!(ys[static_cast<std::size_t>(t + 1)] > ys[static_cast<std::size_t>(t)])) {
          check.increasing = false;
          break;
        }
      }
      check.convex = true;
      double prev_slope = 0.0;
      for (int t = 0; t + 1 < s; ++t) {
        double slope = (ys[static_cast<std::size_t>(t + 1)] - ys[static_cast<std::size_t>(t)]) /
                       (xs[static_cast<std::size_t>(t + 1)] - xs[static_cast<std::size_t>(t)]);
        if (t > 0 && slope < prev_slope - tol * std::max(1.0, std::fabs(prev_slope))) {
          check.convex = false;
          break;
        }
        prev_slope = slope;
      }
      double d0 = b.derivative(b.left);
      check.positive_slope = std::isfinite(d0) && d0 > 0.0;
    } catch (const Error& e) {
      check.note = e.what();
    }
    report.branches.push_back(std::move(check));
  }

  try {
    TailSums sums = tail_sums(slope_terms(map, tail_index));
    report.cutoff = sums.cutoff;
    report.slope_sum = sums.total;
    report.tail_after_cutoff = sums.after;
    report.last_tail_term = sums.last_term;
  } catch (const Error& e) {
    report.tail_after_cutoff = std::numeric_limits<double>::infinity();
    report.branches.push_back(BranchCheck{.index = 0, .note = e.what()});
  }

  bool all_ok = true;
  for (const BranchCheck& c : report.branches) {
    if (!c.ok()) all_ok = false;
  }
  report.admissible = all_ok && report.tail_after_cutoff < 1.0;
  return report;
}

std::string ValidationReport::summary() const {
  std::string out;
  out += "branches checked: " + std::to_string(branches.size()) + "\n";
  long long bad = 0;
  for (const BranchCheck& c : branches) {
    if (!c.ok()) ++bad;
  }
  out += "branches failing: " + std::to_string(bad) + "\n";
  for (const BranchCheck& c : branches) {
    if (c.ok()) continue;
    out += "  branch " + std::to_string(c.index) + " [" + format_double(c.left) +
           ", " + format_double(c.right) + ")";
    if (!c.note.empty()) {
      out += ": " + c.note;
    } else {
      if (!c.starts_at_zero) out += " value at left endpoint is not 0;";
      if (!c.increasing) out += " not strictly increasing;";
      if (!c.convex) out += " not convex;";
      if (!c.positive_slope) out += " slope at left endpoint is not positive;";
    }
    out += "\n";
  }
  out += "slope-sum cutoff N = " + std::to_string(cutoff) +
         ", tail after cutoff = " + format_double(tail_after_cutoff) +
         ", full sum (to index " + std::to_string(tail_index) + ") = " +
         format_double(slope_sum) + "\n";
  out += admissible ? "admissible: yes\n" : "admissible: no\n";
  return out;
}

// ---------------------------------------------------------------------------
// ly_constants

LYConstants ly_constants(const MapSpec& map, long long n, long long tail_index) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "truncation level n must be >= 1");
  if (tail_index < 1) fail(ErrorCode::InvalidArgument, "tail_index must be >= 1");

  SlopeTerms terms = slope_terms(map, tail_index);
  TailSums sums = tail_sums(terms);
  if (sums.after >= 1.0) {
    fail(ErrorCode::NotContracting,
         "slope tail never drops below 1 within index " +
             std::to_string(terms.count));
  }

  LYConstants ly;
  ly.cutoff = sums.cutoff;
  ly.d1 = sums.after;
  ly.c = sums.total;
  ly.tail_index = terms.count;
  ly.last_tail_term = sums.last_term;

  long double d = 0.0L;
  for (long long m = 1; m <= sums.cutoff; ++m) {
    double a_m = map.partition_point(m);
    if (a_m <= 0.0) continue;  // an endpoint at 0 is covered by the sup term
    d += terms.term(m) / a_m;
  }
  ly.d = static_cast<double>(d);
  ly.a_n = map.partition_point(n);
  ly.contraction = ly.a_n + ly.d1;
  if (ly.contraction >= 1.0) {
    fail(ErrorCode::NotContracting,
         "a_n + d1 = " + format_double(ly.contraction) +
             " >= 1 at n = " + std::to_string(n) + "; increase n");
  }
  ly.sup_bound = ly.d / (1.0 - ly.contraction);
  return ly;
}

// ---------------------------------------------------------------------------
// branch_inverse

double branch_inverse(const Branch& branch, double y, double tol) {
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tol must be positive");
  double slack = std::max(tol, 1e-14);
  if (!(y >= -slack) || !(y <= branch.image_sup + slack)) {
    fail(ErrorCode::NotInImage,
         "value " + format_double(y) + " is outside the branch image [0, " +
             format_double(branch.image_sup) + "]");
  }
  double target = std::min(std::max(y, 0.0), branch.image_sup);

  if (branch.inverse) {
    double x = branch.inverse(target);
    return std::min(std::max(x, branch.left), branch.right);
  }

  double lo = branch.left;
  double hi = branch.right;
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    double fm;
    try {
      fm = branch.forward(mid);
    } catch (const Error&) {
      // Formula failed inside the bracket (typically near the right
      // endpoint); retreat the upper end.
      hi = mid;
      continue;
    }
    if (std::fabs(fm - target) <= tol) break;
    if (fm < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(hi))) {
      mid = 0.5 * (lo + hi);
      break;
    }
  }

  // Newton polish when the derivative is available and safely positive.
  if (branch.derivative) {
    double x = mid;
    for (int step = 0; step < 4; ++step) {
      double d;
      double fx;
      try {
        d = branch.derivative(x);
        fx = branch.forward(x);
      } catch (const Error&) {
        break;
      }
      if (!(d > 1e-8) || !std::isfinite(fx)) break;
      double next = x - (fx - target) / d;
      if (!(next >= lo && next <= hi)) break;
      x = next;
      try {
        if (std::fabs(branch.forward(x) - target) <= 0.5 * tol) break;
      } catch (const Error&) {
        break;
      }
    }
    mid = x;
  }
  return std::min(std::max(mid, branch.left), branch.right);
}

}  // namespace ulampc
