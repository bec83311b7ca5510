#include <cmath>
#include <random>

#include "doctest.h"
#include "ulampc/catalog.hpp"
#include "ulampc/error.hpp"

using namespace ulampc;

TEST_CASE("the catalog lists the built-in maps") {
  const auto& entries = catalog();
  REQUIRE(entries.size() == 4);
  CHECK(find_catalog_entry("example1") != nullptr);
  CHECK(find_catalog_entry("example2") != nullptr);
  CHECK(find_catalog_entry("identity") != nullptr);
  CHECK(find_catalog_entry("doubling") != nullptr);
  CHECK(find_catalog_entry("no-such-map") == nullptr);
  CHECK(find_catalog_entry("") == nullptr);
}

TEST_CASE("exact densities are attached where they are known") {
  const CatalogEntry* ex1 = find_catalog_entry("example1");
  REQUIRE(ex1->exact_density.has_value());
  CHECK(ex1->exact_density->is_affine);
  CHECK(ex1->exact_density->slope == -2.0);
  CHECK(ex1->exact_density->intercept == 2.0);
  CHECK((*ex1->exact_density)(0.25) == 1.5);

  const CatalogEntry* doubling = find_catalog_entry("doubling");
  REQUIRE(doubling->exact_density.has_value());
  CHECK((*doubling->exact_density)(0.8) == 1.0);

  CHECK_FALSE(find_catalog_entry("example2")->exact_density.has_value());
}

TEST_CASE("example1 branches carry [a_i, a_{i-1}) onto [0, 1)") {
  MapSpec map = example1(20);
  CHECK(map.class_tag() == ClassTag::CountableAccumulatingAtZero);
  CHECK(map.branches().size() == 20);
  for (long long i = 1; i <= 20; ++i) {
    double a_i = map.partition_point(i);
    CHECK(a_i == doctest::Approx(1.0 - std::sqrt(double(i) / (i + 1))).epsilon(1e-15));
    // each branch starts at 0 and fills the unit interval
    const Branch& b = map.branch_at(a_i);
    CHECK(b.forward(b.left) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(b.image_sup == doctest::Approx(1.0).epsilon(1e-12));
  }
  // tau(1/2) lands exactly on a_1 = 1 - sqrt(1/2)
  CHECK(map.eval(0.5) == doctest::Approx(0.2928932188134524).epsilon(1e-15));
}

TEST_CASE("example2 branches are the stated Moebius transforms") {
  MapSpec map = example2(20);
  CHECK(map.branches().size() == 20);
  for (long long i = 1; i <= 20; ++i) {
    CHECK(map.partition_point(i) == doctest::Approx(1.0 / (i + 1)).epsilon(1e-15));
  }
  // branch 2 at x = 0.4: beta = 5/6, tau = 1/(5/6 - 2/5) - 2 = 30/13 - 2
  CHECK(map.eval(0.4) == doctest::Approx(30.0 / 13.0 - 2.0).epsilon(1e-14));
  CHECK(map.eval(0.5) == doctest::Approx(0.0).epsilon(1e-14));
}

// The closed-form derivative and inverse closures must agree with what the
// forward formula itself implies; this pins down sign or index slips in any
// one of the three forms.
TEST_CASE("catalog derivatives and inverses are consistent with forward") {
  std::mt19937 rng(314159);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  for (const char* name : {"example1", "example2"}) {
    CAPTURE(name);
    MapSpec map = find_catalog_entry(name)->make(10);
    for (const Branch& b : map.branches()) {
      CAPTURE(b.family_index);
      double width = b.right - b.left;
      for (int t = 0; t < 20; ++t) {
        double x = b.left + unit(rng) * width;
        // derivative against a central difference
        double h = 1e-6 * width;
        double numeric = (b.forward(x + h) - b.forward(x - h)) / (2 * h);
        double analytic = b.derivative(x);
        CHECK(analytic == doctest::Approx(numeric).epsilon(1e-6));
        // inverse against the forward value
        double y = b.forward(x);
        CHECK(b.inverse(y) == doctest::Approx(x).epsilon(1e-11));
      }
      // the family slope matches the branch derivative at the left endpoint
      if (b.family_index >= 1) {
        CHECK(map.family()->slope_at_left(b.family_index) ==
              doctest::Approx(b.derivative(b.left)).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("branch count requests are honored") {
  CHECK(example1(3).branches().size() == 3);
  CHECK(example2(100).branches().size() == 100);
  CHECK_THROWS_AS(example1(0), Error);
  CHECK_THROWS_AS(example2(-5), Error);
  CHECK(identity_map().branches().size() == 1);
  CHECK(doubling_map().branches().size() == 2);
}
