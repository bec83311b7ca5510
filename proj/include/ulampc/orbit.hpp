#pragma once

#include <cstdint>
#include <optional>

#include "ulampc/map_model.hpp"
#include "ulampc/ulam.hpp"

namespace ulampc {

// Cell-occupation counts of simulated orbits, merged over all starts.
// Invariant: sum(counts) == total_steps - burned.
struct OrbitHistogram {
  int k = 0;
  std::vector<long long> counts;
  long long total_steps = 0;  // steps generated across all starts
  long long burned = 0;       // steps discarded as burn-in across all starts
  long long anomalies = 0;    // resets after escapes, stagnation, or formula failures
  std::uint64_t seed = 0;
  int starts = 0;

  DensityVector density() const;  // counts scaled to mean height 1
};

// Runs `starts` independent orbits (deterministic per seed; stream s is
// derived from seed and s only) of `steps` total map applications, drops the
// first burn_in of each orbit, and bins the rest on the k-cell grid.  A step
// that leaves [0,1], lands below a countable map's resolution floor, breaks
// the branch formula, or stalls on a fixed point is counted as an anomaly
// and the orbit restarts from a fresh uniform draw.  If more than 1% of
// counted steps are anomalous the orbit statistics are untrustworthy and
// Error(DegenerateOrbit) is thrown.
OrbitHistogram birkhoff_histogram(const MapSpec& map, int k, long long steps,
                                  long long burn_in, std::uint64_t seed,
                                  int starts = 8,
                                  std::optional<double> x0 = std::nullopt);

DensityVector birkhoff_density(const MapSpec& map, int k, long long steps,
                               long long burn_in, std::uint64_t seed,
                               int starts = 8,
                               std::optional<double> x0 = std::nullopt);

}  // namespace ulampc
