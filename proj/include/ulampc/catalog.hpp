#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ulampc/analysis.hpp"
#include "ulampc/map_model.hpp"

namespace ulampc {

// Built-in maps with closed-form branches and, where known, the exact
// invariant density.  `make(n)` materializes n branches for countable
// entries; finite entries ignore n.
struct CatalogEntry {
  std::string name;
  ClassTag tag = ClassTag::FiniteBranches;
  std::function<MapSpec(long long)> make;
  std::optional<ExactDensity> exact_density;
  std::string notes;
};

// Countable map with branches
//   tau(x) = 1 - sqrt(1 - i^2 + i(i+1)(1-x)^2)   on [a_i, a_{i-1}),
//   a_i = 1 - sqrt(i/(i+1)),
// conjugate to a piecewise-linear family; invariant density 2(1-x).
MapSpec example1(long long n_branches = 40);

// Countable map with branches
//   tau(x) = 1/((2i+1)/(i(i+1)) - x) - i          on [1/(i+1), 1/i);
// no closed-form invariant density.
MapSpec example2(long long n_branches = 40);

MapSpec identity_map();

// 2x mod 1 with exact slopes; Lebesgue measure is invariant.
MapSpec doubling_map();

const std::vector<CatalogEntry>& catalog();

// nullptr when the name is unknown.
const CatalogEntry* find_catalog_entry(std::string_view name);

}  // namespace ulampc
