#include "ulampc/orbit.hpp"

#include <cmath>
#include <random>

#include "ulampc/error.hpp"
#include "ulampc/numfmt.hpp"

namespace ulampc {

DensityVector OrbitHistogram::density() const {
  long long counted = total_steps - burned;
  if (counted <= 0) {
    fail(ErrorCode::InvalidArgument, "histogram holds no counted steps");
  }
  DensityVector f{k, std::vector<double>(static_cast<std::size_t>(k), 0.0)};
  double scale = static_cast<double>(k) / static_cast<double>(counted);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    f.values[i] = static_cast<double>(counts[i]) * scale;
  }
  return f;
}

namespace {

// Uniform double in [0,1) straight from the engine output; avoids
// std::uniform_real_distribution, whose stream is not pinned down by the
// standard, so histograms are identical across platforms.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Expanding maps shift mantissa bits out: an orbit of the doubling map, say,
// reaches an exactly dyadic value and collapses onto the fixed point at 0
// within ~52 steps, which is an artifact of binary arithmetic, not of the
// dynamics.  Refreshing the low bits with sub-ulp-scale noise keeps orbits
// generic; the perturbation of the invariant density is ~1e-15, far below
// sampling noise.
constexpr double kDither = 0x1.0p-50;

// An orbit this close to a fixed point is stuck (the dither alone moves a
// point by at most 2^-50, so a genuine stall always lands under this).
constexpr double kStallEps = 1e-13;

}  // namespace

OrbitHistogram birkhoff_histogram(const MapSpec& map, int k, long long steps,
                                  long long burn_in, std::uint64_t seed,
                                  int starts, std::optional<double> x0) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "k must be >= 1");
  if (starts < 1) fail(ErrorCode::InvalidArgument, "starts must be >= 1");
  if (burn_in < 0) fail(ErrorCode::InvalidArgument, "burn_in must be >= 0");
  if (steps < starts * (burn_in + 1)) {
    fail(ErrorCode::InvalidArgument,
         "steps must cover burn-in on every start: need more than " +
             std::to_string(starts * burn_in));
  }
  if (x0 && !(*x0 >= 0.0 && *x0 <= 1.0)) {
    fail(ErrorCode::OutOfDomain,
         "start point " + format_double(*x0) + " is outside [0,1]");
  }

  double floor = map.class_tag() == ClassTag::CountableAccumulatingAtZero
                     ? map.resolution_floor()
                     : 0.0;

  OrbitHistogram h;
  h.k = k;
  h.counts.assign(static_cast<std::size_t>(k), 0);
  h.seed = seed;
  h.starts = starts;
  PartitionGrid grid{k};

  for (int s = 0; s < starts; ++s) {
    long long per_start = steps / starts;
    if (s == starts - 1) per_start += steps % starts;

    // Independent, reproducible stream per start.
    std::mt19937_64 rng(seed +
                        0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(s + 1));
    auto fresh = [&]() {
      double x = uniform01(rng);
      // keep clear of the unmapped sliver below a countable map's floor
      while (x < floor) x = uniform01(rng);
      return x;
    };

    double x = (s == 0 && x0) ? *x0 : fresh();
    if (x < floor) x = fresh();

    for (long long step = 0; step < per_start; ++step) {
      double next;
      bool anomaly = false;
      try {
        next = map.eval(x);
        next += uniform01(rng) * kDither;
        if (next >= 1.0) next -= 1.0;
        if (!(next >= 0.0 && next <= 1.0) || next < floor) {
          anomaly = true;  // escaped the domain or fell below the floor
        } else if (std::fabs(next - x) <= kStallEps) {
          anomaly = true;  // pinned to a fixed point
        }
      } catch (const Error&) {
        anomaly = true;  // branch formula failed at this point
      }
      if (anomaly) {
        ++h.anomalies;
        next = fresh();
      }
      x = next;
      ++h.total_steps;
      if (step < burn_in) {
        ++h.burned;
      } else {
        ++h.counts[static_cast<std::size_t>(grid.cell_of(x)) - 1];
      }
    }
  }

  long long counted = h.total_steps - h.burned;
  if (h.anomalies * 100 > counted) {
    fail(ErrorCode::DegenerateOrbit,
         std::to_string(h.anomalies) + " anomalous steps out of " +
             std::to_string(counted) +
             " counted (over 1%); the orbit statistics are untrustworthy");
  }
  return h;
}

DensityVector birkhoff_density(const MapSpec& map, int k, long long steps,
                               long long burn_in, std::uint64_t seed,
                               int starts, std::optional<double> x0) {
  return birkhoff_histogram(map, k, steps, burn_in, seed, starts, x0).density();
}

}  // namespace ulampc
