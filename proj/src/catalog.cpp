#include "ulampc/catalog.hpp"

#include <cmath>

#include "ulampc/error.hpp"

namespace ulampc {

namespace {

// Radicands that vanish exactly in real arithmetic can dip a few ulps
// negative at branch endpoints; clip instead of feeding sqrt a stray -1e-17.
double safe_sqrt(double v) { return std::sqrt(std::max(v, 0.0)); }

double ex1_partition(long long i) {
  double m = static_cast<double>(i);
  return 1.0 - std::sqrt(m / (m + 1.0));
}

std::vector<Branch> ex1_branches(long long n) {
  std::vector<Branch> branches;
  branches.reserve(static_cast<std::size_t>(n));
  for (long long i = n; i >= 1; --i) {
    double m = static_cast<double>(i);
    Branch b;
    b.left = ex1_partition(i);
    b.right = i == 1 ? 1.0 : ex1_partition(i - 1);
    b.family_index = i;
    b.forward = [m](double x) {
      double u = 1.0 - x;
      return 1.0 - safe_sqrt(1.0 - m * m + m * (m + 1.0) * u * u);
    };
    b.derivative = [m](double x) {
      double u = 1.0 - x;
      double rad = 1.0 - m * m + m * (m + 1.0) * u * u;
      if (rad <= 0.0) {
        // Exactly at the right endpoint: branch 1 tends to sqrt(2) (a 0/0
        // limit); branches i >= 2 have unbounded terminal slope.
        return m == 1.0 ? std::sqrt(m * (m + 1.0)) : 1e300;
      }
      return m * (m + 1.0) * u / std::sqrt(rad);
    };
    b.inverse = [m](double y) {
      double w = 1.0 - y;
      return 1.0 - safe_sqrt((w * w - 1.0 + m * m) / (m * (m + 1.0)));
    };
    b.image_sup = 1.0;  // every branch maps onto [0, 1)
    branches.push_back(std::move(b));
  }
  return branches;
}

double ex2_partition(long long i) {
  return 1.0 / (static_cast<double>(i) + 1.0);
}

std::vector<Branch> ex2_branches(long long n) {
  std::vector<Branch> branches;
  branches.reserve(static_cast<std::size_t>(n));
  for (long long i = n; i >= 1; --i) {
    double m = static_cast<double>(i);
    double beta = (2.0 * m + 1.0) / (m * (m + 1.0));
    Branch b;
    b.left = ex2_partition(i);
    b.right = 1.0 / m;
    b.family_index = i;
    b.forward = [m, beta](double x) { return 1.0 / (beta - x) - m; };
    b.derivative = [beta](double x) {
      double d = beta - x;
      return 1.0 / (d * d);
    };
    b.inverse = [m, beta](double y) { return beta - 1.0 / (y + m); };
    b.image_sup = 1.0;
    branches.push_back(std::move(b));
  }
  return branches;
}

MapSpec make_ex1(long long n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "n_branches must be >= 1");
  FamilyRule family;
  family.partition_point = [](long long m) { return ex1_partition(m); };
  family.slope_at_left = [](long long m) {
    // tau'(a_i) = i(i+1) sqrt(i/(i+1)) = i sqrt(i(i+1))
    double v = static_cast<double>(m);
    return v * std::sqrt(v * (v + 1.0));
  };
  return MapSpec(ex1_branches(n), ClassTag::CountableAccumulatingAtZero,
                 std::move(family), "example1");
}

MapSpec make_ex2(long long n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "n_branches must be >= 1");
  FamilyRule family;
  family.partition_point = [](long long m) { return ex2_partition(m); };
  family.slope_at_left = [](long long m) {
    // beta - a_i = 1/i, so tau'(a_i) = i^2
    double v = static_cast<double>(m);
    return v * v;
  };
  return MapSpec(ex2_branches(n), ClassTag::CountableAccumulatingAtZero,
                 std::move(family), "example2");
}

}  // namespace

MapSpec example1(long long n_branches) { return make_ex1(n_branches); }

MapSpec example2(long long n_branches) { return make_ex2(n_branches); }

MapSpec identity_map() {
  Branch b;
  b.left = 0.0;
  b.right = 1.0;
  b.forward = [](double x) { return x; };
  b.derivative = [](double) { return 1.0; };
  b.inverse = [](double y) { return y; };
  b.image_sup = 1.0;
  return MapSpec({std::move(b)}, ClassTag::FiniteBranches, std::nullopt,
                 "identity");
}

MapSpec doubling_map() {
  Branch lo;
  lo.left = 0.0;
  lo.right = 0.5;
  lo.forward = [](double x) { return 2.0 * x; };
  lo.derivative = [](double) { return 2.0; };
  lo.inverse = [](double y) { return 0.5 * y; };
  lo.image_sup = 1.0;
  Branch hi;
  hi.left = 0.5;
  hi.right = 1.0;
  hi.forward = [](double x) { return 2.0 * x - 1.0; };
  hi.derivative = [](double) { return 2.0; };
  hi.inverse = [](double y) { return 0.5 * (y + 1.0); };
  hi.image_sup = 1.0;
  return MapSpec({std::move(lo), std::move(hi)}, ClassTag::FiniteBranches,
                 std::nullopt, "doubling");
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> list;
    {
      CatalogEntry e;
      e.name = "example1";
      e.tag = ClassTag::CountableAccumulatingAtZero;
      e.make = [](long long n) { return example1(n < 1 ? 40 : n); };
      e.exact_density = ExactDensity::affine(-2.0, 2.0);  // 2(1-x)
      e.notes = "countable family conjugate to a piecewise-linear map; "
                "invariant density 2(1-x)";
      list.push_back(std::move(e));
    }
    {
      CatalogEntry e;
      e.name = "example2";
      e.tag = ClassTag::CountableAccumulatingAtZero;
      e.make = [](long long n) { return example2(n < 1 ? 40 : n); };
      e.notes = "countable family of Moebius branches on [1/(i+1), 1/i); "
                "no closed-form density";
      list.push_back(std::move(e));
    }
    {
      CatalogEntry e;
      e.name = "identity";
      e.tag = ClassTag::FiniteBranches;
      e.make = [](long long) { return identity_map(); };
      e.notes = "degenerate reference map: every density is stationary";
      list.push_back(std::move(e));
    }
    {
      CatalogEntry e;
      e.name = "doubling";
      e.tag = ClassTag::FiniteBranches;
      e.make = [](long long) { return doubling_map(); };
      e.exact_density = ExactDensity::affine(0.0, 1.0);
      e.notes = "2x mod 1; Lebesgue measure is invariant";
      list.push_back(std::move(e));
    }
    return list;
  }();
  return entries;
}

const CatalogEntry* find_catalog_entry(std::string_view name) {
  for (const CatalogEntry& e : catalog()) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

}  // namespace ulampc
