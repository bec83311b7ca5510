#pragma once

#include "ulampc/map_model.hpp"

namespace ulampc {

// The n-th truncation tau_n of a countable map: branches 1..n are kept
// verbatim and the remaining interval [0, a_n) gets one linear surjective
// branch x -> x / a_n.
struct TruncatedMap {
  MapSpec spec;
  long long n = 0;
  double a_n = 0.0;
  double linear_slope = 0.0;  // 1 / a_n
};

// Requires a countable base with at least n materialized branches (rebuild
// the base with a higher branch count for larger n).
TruncatedMap truncate(const MapSpec& base, long long n);

}  // namespace ulampc
