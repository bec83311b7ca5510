#include <cmath>

#include "doctest.h"
#include "ulampc/catalog.hpp"
#include "ulampc/error.hpp"
#include "ulampc/truncation.hpp"

using namespace ulampc;

TEST_CASE("truncation keeps the outer branches and adds one linear branch") {
  MapSpec base = example1(12);
  TruncatedMap tr = truncate(base, 5);
  CHECK(tr.n == 5);
  CHECK(tr.spec.class_tag() == ClassTag::FiniteBranches);
  CHECK(tr.spec.branches().size() == 6);
  CHECK(tr.a_n == doctest::Approx(0.0871290708247231).epsilon(1e-15));
  CHECK(tr.linear_slope == doctest::Approx(11.477225575051667).epsilon(1e-15));
  CHECK(tr.spec.resolution_floor() == 0.0);

  // outer branches are shared with the base map, so values agree exactly
  for (double x : {0.09, 0.13, 0.2928932188134524, 0.5, 0.77, 0.999}) {
    CHECK(tr.spec.eval(x) == base.eval(x));
  }
  // the new branch is x -> x / a_n on [0, a_n)
  CHECK(tr.spec.eval(0.04) == doctest::Approx(0.04 / tr.a_n).epsilon(1e-15));
  CHECK(tr.spec.eval(0.0) == 0.0);
  const Branch& lin = tr.spec.branches().front();
  CHECK(lin.family_index == 0);
  CHECK(lin.image_sup == 1.0);
  CHECK(lin.derivative(0.02) == doctest::Approx(tr.linear_slope).epsilon(1e-15));
  CHECK(lin.inverse(0.5) == doctest::Approx(tr.a_n / 2).epsilon(1e-15));
}

TEST_CASE("truncations at increasing n refine toward the base map") {
  MapSpec base = example2(20);
  double floor_prev = 1.0;
  for (long long n : {1, 2, 5, 10, 20}) {
    TruncatedMap tr = truncate(base, n);
    CHECK(tr.a_n == doctest::Approx(1.0 / (n + 1)).epsilon(1e-15));
    CHECK(tr.a_n < floor_prev);
    floor_prev = tr.a_n;
    CHECK(tr.spec.branches().size() == static_cast<std::size_t>(n) + 1);
    // above the cut the truncation is the base map itself
    CHECK(tr.spec.eval(0.6) == base.eval(0.6));
  }
}

TEST_CASE("truncation argument errors") {
  MapSpec base = example1(10);
  CHECK_THROWS_AS(truncate(base, 0), Error);
  CHECK_THROWS_AS(truncate(base, 11), Error);   // only 10 branches materialized
  CHECK_THROWS_AS(truncate(doubling_map(), 1), Error);  // already finite
  TruncatedMap tr = truncate(base, 10);         // n == max index is fine
  CHECK(tr.spec.branches().size() == 11);
}
