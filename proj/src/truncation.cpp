#include "ulampc/truncation.hpp"

#include <vector>

#include "ulampc/error.hpp"

namespace ulampc {

TruncatedMap truncate(const MapSpec& base, long long n) {
  if (base.class_tag() != ClassTag::CountableAccumulatingAtZero) {
    fail(ErrorCode::InvalidArgument, "truncate requires a countable map");
  }
  if (n < 1) {
    fail(ErrorCode::InvalidArgument, "truncation level n must be >= 1");
  }
  if (n > base.max_branch_index()) {
    fail(ErrorCode::InvalidArgument,
         "truncation level " + std::to_string(n) + " exceeds the " +
             std::to_string(base.max_branch_index()) +
             " materialized branches; rebuild the base map with more");
  }

  double a_n = base.partition_point(n);
  double slope = 1.0 / a_n;

  std::vector<Branch> branches;
  branches.reserve(static_cast<std::size_t>(n) + 1);

  Branch linear;
  linear.left = 0.0;
  linear.right = a_n;
  linear.forward = [slope](double x) { return slope * x; };
  linear.derivative = [slope](double) { return slope; };
  linear.inverse = [a_n](double y) { return y * a_n; };
  linear.image_sup = 1.0;
  linear.family_index = 0;
  branches.push_back(std::move(linear));

  // Branches above the cut are shared with the base map unchanged, so
  // tau_n(x) agrees with tau(x) exactly for x >= a_n.
  for (const Branch& b : base.branches()) {
    if (b.family_index >= 1 && b.family_index <= n) {
      branches.push_back(b);
    }
  }

  std::string name = base.name();
  TruncatedMap out{MapSpec(std::move(branches), ClassTag::FiniteBranches,
                           std::nullopt, std::move(name)),
                   n, a_n, slope};
  return out;
}

}  // namespace ulampc
