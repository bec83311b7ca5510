#include <cmath>
#include <vector>

#include "doctest.h"
#include "ulampc/analysis.hpp"
#include "ulampc/catalog.hpp"
#include "ulampc/error.hpp"
#include "ulampc/solver.hpp"
#include "ulampc/truncation.hpp"

using namespace ulampc;

namespace {

UlamMatrix from_rows(const std::vector<std::vector<double>>& rows) {
  std::vector<UlamMatrix::Triplet> ts;
  int k = static_cast<int>(rows.size());
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (rows[i][j] != 0.0) ts.push_back({i, j, rows[i][j]});
    }
  }
  return UlamMatrix::from_triplets(k, std::move(ts), 1e-12);
}

}  // namespace

TEST_CASE("uniform input is already stationary for measure-preserving maps") {
  UlamMatrix m = ulam_matrix(doubling_map(), 8);
  for (SolveMethod method : {SolveMethod::PowerCesaro, SolveMethod::DirectNullspace}) {
    CAPTURE(solve_method_name(method));
    SolveReport report = stationary_density(m, method);
    CHECK(report.density.k == 8);
    for (double v : report.density.values) {
      CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(report.residual_l1 <= 1e-12);
    CHECK(report.monotonicity_defect <= 1e-12);
    CHECK(report.density.mass() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("a permutation block forces the Cesaro fallback") {
  // cells 1 and 2 swap forever; cell 3 drains into them.  Plain power
  // iterates oscillate with period 2, but their running averages settle on
  // the stationary density (1.5, 1.5, 0).
  UlamMatrix m = from_rows({{0.0, 1.0, 0.0},
                            {1.0, 0.0, 0.0},
                            {0.25, 0.75, 0.0}});
  SolveReport report = stationary_density(m, SolveMethod::PowerCesaro, 1e-12, 100000);
  CHECK(report.density.values[0] == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(report.density.values[1] == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(report.density.values[2] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(report.residual_l1 <= 1e-10);
  CHECK(report.iterations > 1);

  SolveReport direct = stationary_density(m, SolveMethod::DirectNullspace);
  CHECK(l1_between(report.density, direct.density) <= 1e-9);
  CHECK(direct.iterations == 0);
}

TEST_CASE("the two methods agree on a real truncation") {
  TruncatedMap tr = truncate(example1(10), 6);
  UlamMatrix m = ulam_matrix(tr.spec, 200);
  SolveReport power = stationary_density(m, SolveMethod::PowerCesaro, 1e-13);
  SolveReport direct = stationary_density(m, SolveMethod::DirectNullspace);
  CHECK(l1_between(power.density, direct.density) <= 1e-11);
  CHECK(power.method == SolveMethod::PowerCesaro);
  CHECK(direct.method == SolveMethod::DirectNullspace);
  CHECK(power.residual_l1 <= 1e-13);
  CHECK(direct.residual_l1 <= 1e-12);
}

TEST_CASE("monotonicity defect reports increasing stationary densities") {
  // both cells map into cell 2, so all mass piles up there
  UlamMatrix m = from_rows({{0.0, 1.0}, {0.0, 1.0}});
  SolveReport report = stationary_density(m);
  CHECK(report.density.values[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(report.density.values[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(report.monotonicity_defect == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("reducible systems are singular for the direct method") {
  UlamMatrix m = ulam_matrix(identity_map(), 4);  // every density is stationary
  CHECK_THROWS_AS(stationary_density(m, SolveMethod::DirectNullspace), Error);
  try {
    stationary_density(m, SolveMethod::DirectNullspace);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularSystem);
  }
  // power iteration from the uniform start just stays put
  SolveReport report = stationary_density(m, SolveMethod::PowerCesaro);
  for (double v : report.density.values) CHECK(v == 1.0);
}

TEST_CASE("iteration caps raise NoConvergence") {
  TruncatedMap tr = truncate(example1(8), 5);
  UlamMatrix m = ulam_matrix(tr.spec, 100);
  try {
    stationary_density(m, SolveMethod::PowerCesaro, 1e-13, 3);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoConvergence);
    // the message reports the best residual reached
    CHECK(std::string(e.what()).find("residual") != std::string::npos);
  }
}

TEST_CASE("solver argument validation") {
  UlamMatrix m = ulam_matrix(doubling_map(), 4);
  CHECK_THROWS_AS(stationary_density(m, SolveMethod::PowerCesaro, -1.0), Error);
  CHECK_THROWS_AS(stationary_density(m, SolveMethod::PowerCesaro, 1e-12, 0), Error);
}
