#include <cmath>
#include <memory>

#include "doctest.h"
#include "ulampc/catalog.hpp"
#include "ulampc/error.hpp"
#include "ulampc/map_model.hpp"

using namespace ulampc;

namespace {

Branch linear_branch(double left, double right, double y0, double y1) {
  Branch b;
  b.left = left;
  b.right = right;
  double slope = (y1 - y0) / (right - left);
  b.forward = [y0, left, slope](double x) { return y0 + slope * (x - left); };
  b.derivative = [slope](double) { return slope; };
  b.inverse = [y0, left, slope](double y) { return left + (y - y0) / slope; };
  b.image_sup = y1;
  return b;
}

MapSpec four_fold() {
  std::vector<Branch> bs;
  for (int j = 0; j < 4; ++j) {
    bs.push_back(linear_branch(0.25 * j, 0.25 * (j + 1), 0.0, 1.0));
  }
  return MapSpec(std::move(bs), ClassTag::FiniteBranches, std::nullopt, "4x");
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;  // sentinel
}

}  // namespace

TEST_CASE("map construction rejects malformed branch lists") {
  CHECK(code_of([] {
          MapSpec(std::vector<Branch>{}, ClassTag::FiniteBranches);
        }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] {
          std::vector<Branch> bs;
          bs.push_back(linear_branch(0.0, 0.4, 0.0, 1.0));
          bs.push_back(linear_branch(0.6, 1.0, 0.0, 1.0));  // gap at [0.4, 0.6)
          MapSpec(std::move(bs), ClassTag::FiniteBranches);
        }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] {
          std::vector<Branch> bs;
          bs.push_back(linear_branch(0.0, 0.9, 0.0, 1.0));  // must end at 1
          MapSpec(std::move(bs), ClassTag::FiniteBranches);
        }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] {
          std::vector<Branch> bs;
          bs.push_back(linear_branch(0.25, 1.0, 0.0, 1.0));  // finite: start at 0
          MapSpec(std::move(bs), ClassTag::FiniteBranches);
        }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] {
          std::vector<Branch> bs;
          bs.push_back(linear_branch(0.25, 1.0, 0.0, 1.0));  // countable: no family
          MapSpec(std::move(bs), ClassTag::CountableAccumulatingAtZero);
        }) == ErrorCode::InvalidArgument);
}

TEST_CASE("evaluation dispatches branches and guards the domain") {
  MapSpec map = four_fold();
  CHECK(map.eval(0.0) == 0.0);
  CHECK(map.eval(0.3) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(map.eval(0.25) == doctest::Approx(0.0).epsilon(1e-15));  // left-closed cells
  CHECK(map.eval(1.0) == 1.0);  // x = 1 belongs to the last branch
  CHECK(code_of([&] { map.eval(-0.1); }) == ErrorCode::OutOfDomain);
  CHECK(code_of([&] { map.eval(1.1); }) == ErrorCode::OutOfDomain);

  MapSpec ex1 = example1(10);
  CHECK(code_of([&] { ex1.eval(ex1.resolution_floor() / 2); }) ==
        ErrorCode::BelowResolutionFloor);
}

TEST_CASE("partition points run right to left") {
  MapSpec map = four_fold();
  CHECK(map.partition_point(0) == 1.0);
  CHECK(map.partition_point(1) == 0.75);
  CHECK(map.partition_point(4) == 0.0);
  CHECK(map.max_branch_index() == 4);
  CHECK(code_of([&] { map.partition_point(5); }) == ErrorCode::IndexOutOfRange);

  MapSpec ex1 = example1(10);
  CHECK(ex1.partition_point(1) == doctest::Approx(0.2928932188134524).epsilon(1e-15));
  CHECK(ex1.partition_point(5) == doctest::Approx(0.0871290708247231).epsilon(1e-15));
  // the family rule answers beyond the materialized range
  CHECK(ex1.partition_point(200) ==
        doctest::Approx(1.0 - std::sqrt(200.0 / 201.0)).epsilon(1e-12));
  CHECK(ex1.max_branch_index() == 10);
}

TEST_CASE("class validation accepts the catalog maps") {
  for (const char* name : {"example1", "example2", "doubling"}) {
    CAPTURE(name);
    const CatalogEntry* entry = find_catalog_entry(name);
    REQUIRE(entry != nullptr);
    ValidationReport report = validate(entry->make(30));
    CHECK(report.admissible);
    for (const BranchCheck& check : report.branches) {
      CAPTURE(check.index);
      CAPTURE(check.note);
      CHECK(check.ok());
    }
    CHECK(report.tail_after_cutoff < 1.0);
    CHECK(report.summary().find("admissible: yes") != std::string::npos);
  }
}

TEST_CASE("class validation flags non-increasing and non-onto branches") {
  std::vector<Branch> bs;
  bs.push_back(linear_branch(0.0, 0.5, 1.0, 0.0));  // decreasing, tau(0) != 0
  bs.push_back(linear_branch(0.5, 1.0, 0.0, 1.0));
  ValidationReport report = validate(MapSpec(std::move(bs), ClassTag::FiniteBranches));
  CHECK_FALSE(report.admissible);
  CHECK_FALSE(report.branches[0].starts_at_zero);
  CHECK_FALSE(report.branches[0].increasing);
  CHECK(report.branches[1].ok());
  CHECK(report.summary().find("admissible: no") != std::string::npos);
}

TEST_CASE("class validation flags concave branches") {
  std::vector<Branch> bs;
  Branch b;  // sqrt is increasing but concave
  b.left = 0.0;
  b.right = 1.0;
  b.forward = [](double x) { return std::sqrt(x); };
  b.derivative = [](double x) { return x > 0 ? 0.5 / std::sqrt(x) : 1e300; };
  b.image_sup = 1.0;
  bs.push_back(std::move(b));
  ValidationReport report = validate(MapSpec(std::move(bs), ClassTag::FiniteBranches));
  CHECK_FALSE(report.admissible);
  CHECK_FALSE(report.branches[0].convex);
  CHECK(report.branches[0].increasing);
}

// Reference sums computed independently with exact (fsum) accumulation over
// the same index range.
TEST_CASE("Lasota-Yorke constants match the reference sums") {
  MapSpec ex1 = example1(12);
  LYConstants ly = ly_constants(ex1, 5, 1000000);
  CHECK(ly.cutoff == 1);
  CHECK(ly.d1 == doctest::Approx(0.566555584167996).epsilon(1e-12));
  CHECK(ly.c == doctest::Approx(1.2736623653545434).epsilon(1e-12));
  CHECK(ly.d == doctest::Approx(2.414213562373095).epsilon(1e-12));  // 1 + sqrt 2
  CHECK(ly.a_n == doctest::Approx(0.0871290708247231).epsilon(1e-14));
  CHECK(ly.contraction == doctest::Approx(0.6536846549927191).epsilon(1e-12));
  CHECK(ly.sup_bound == doctest::Approx(6.9711423336506755).epsilon(1e-11));

  MapSpec ex2 = example2(14);
  LYConstants ly2 = ly_constants(ex2, 12, 1000000);
  CHECK(ly2.cutoff == 1);
  CHECK(ly2.d1 == doctest::Approx(0.6449330668487264).epsilon(1e-12));
  CHECK(ly2.c == doctest::Approx(1.6449330668487265).epsilon(1e-12));
  CHECK(ly2.d == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ly2.contraction == doctest::Approx(0.7218561437718034).epsilon(1e-12));
  CHECK(ly2.sup_bound == doctest::Approx(7.190523735167988).epsilon(1e-11));
}

TEST_CASE("the first truncation of the harmonic map is not a contraction") {
  MapSpec ex2 = example2(5);
  CHECK(code_of([&] { ly_constants(ex2, 1); }) == ErrorCode::NotContracting);
  try {
    ly_constants(ex2, 1);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("1.1449330668487265") != std::string::npos);
  }
}

TEST_CASE("finite maps sum their own partition points, 0 endpoint included") {
  MapSpec map = four_fold();
  LYConstants ly = ly_constants(map, 4);
  CHECK(ly.cutoff == 1);
  CHECK(ly.d1 == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(ly.c == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ly.d == doctest::Approx(1.0 / 3.0).epsilon(1e-15));  // only a_1 = 3/4 counts
  CHECK(ly.a_n == 0.0);
  CHECK(ly.sup_bound == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  // at n = 1 the head point a_1 = 3/4 pushes a_n + d1 past 1
  CHECK(code_of([&] { ly_constants(map, 1); }) == ErrorCode::NotContracting);
}

TEST_CASE("branch inversion agrees between closed forms and bracketing") {
  MapSpec ex2 = example2(6);
  for (const Branch& b : ex2.branches()) {
    Branch blind = b;
    blind.inverse = nullptr;
    for (double frac : {0.0, 0.1, 0.37, 0.5, 0.93, 1.0}) {
      double y = frac * b.image_sup;
      double closed = branch_inverse(b, y);
      double bracketed = branch_inverse(blind, y, 1e-13);
      CHECK(closed == doctest::Approx(bracketed).epsilon(1e-10));
      CHECK(b.forward(bracketed) == doctest::Approx(y).epsilon(1e-9));
    }
  }
}

TEST_CASE("branch inversion rejects values outside the image") {
  Branch b = linear_branch(0.0, 0.5, 0.0, 0.8);
  CHECK(branch_inverse(b, 0.4) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(code_of([&] { branch_inverse(b, 0.9); }) == ErrorCode::NotInImage);
  CHECK(code_of([&] { branch_inverse(b, -0.1); }) == ErrorCode::NotInImage);
  // a few ulps of slack are forgiven and clamped
  CHECK(branch_inverse(b, 0.8 + 1e-15) == doctest::Approx(0.5).epsilon(1e-13));
}
