#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "doctest.h"
#include "ulampc/analysis.hpp"
#include "ulampc/catalog.hpp"
#include "ulampc/csv.hpp"
#include "ulampc/error.hpp"
#include "ulampc/truncation.hpp"
#include "ulampc/ulam.hpp"

using namespace ulampc;

TEST_CASE("matrix CSV round-trips bitwise") {
  TruncatedMap tr = truncate(example2(5), 3);
  UlamMatrix m = ulam_matrix(tr.spec, 10);
  std::ostringstream out;
  write_matrix_csv(m, out);
  std::string text = out.str();
  CHECK(text.rfind("# k=10 assembly_tol=1e-12", 0) == 0);
  CHECK(text.find("row,col,value") != std::string::npos);

  std::istringstream in(text);
  UlamMatrix back = read_matrix_csv(in);
  REQUIRE(back.k() == m.k());
  REQUIRE(back.nnz() == m.nnz());
  CHECK(back.assembly_tol() == m.assembly_tol());
  for (int i = 0; i < m.k(); ++i) {
    auto va = m.row_values(i);
    auto vb = back.row_values(i);
    auto ca = m.row_cols(i);
    auto cb = back.row_cols(i);
    REQUIRE(va.size() == vb.size());
    for (std::size_t t = 0; t < va.size(); ++t) {
      CHECK(ca[t] == cb[t]);
      CHECK(va[t] == vb[t]);
    }
  }

  // the writer is deterministic
  std::ostringstream again;
  write_matrix_csv(m, again);
  CHECK(again.str() == text);
}

TEST_CASE("matrix CSV rejects malformed input") {
  std::istringstream no_header("row,col,value\n1,1,1\n");
  CHECK_THROWS_AS(read_matrix_csv(no_header), Error);
  std::istringstream bad_columns("# k=2 assembly_tol=1e-12\nrow;col;value\n");
  CHECK_THROWS_AS(read_matrix_csv(bad_columns), Error);
  std::istringstream bad_sum(
      "# k=2 assembly_tol=1e-12\nrow,col,value\n1,1,0.5\n2,2,1\n");
  CHECK_THROWS_AS(read_matrix_csv(bad_sum), Error);  // row 1 sums to 0.5
  std::istringstream few_fields("# k=1 assembly_tol=1e-12\nrow,col,value\n1,1\n");
  CHECK_THROWS_AS(read_matrix_csv(few_fields), Error);
}

TEST_CASE("density CSV round-trips bitwise and validates cell numbering") {
  DensityVector f;
  f.k = 4;
  f.values = {1.75, 1.25, 0.75, 0.25};
  std::ostringstream out;
  write_density_csv(f, out);
  std::string text = out.str();
  CHECK(text.rfind("# k=4", 0) == 0);
  CHECK(text.find("cell,left,right,value") != std::string::npos);
  CHECK(text.find("1,0,0.25,1.75") != std::string::npos);

  std::istringstream in(text);
  DensityVector back = read_density_csv(in);
  CHECK(back.k == 4);
  CHECK(back.values == f.values);

  std::istringstream shuffled(
      "# k=2\ncell,left,right,value\n2,0.5,1,1\n1,0,0.5,1\n");
  CHECK_THROWS_AS(read_density_csv(shuffled), Error);
  std::istringstream truncated("# k=3\ncell,left,right,value\n1,0,0.333,1\n");
  CHECK_THROWS_AS(read_density_csv(truncated), Error);
}

TEST_CASE("sweep CSV keeps NaN as blank and quotes messages") {
  std::vector<SweepRow> rows(2);
  rows[0].n = 2;
  rows[0].k = 16;
  rows[0].ok = true;
  rows[0].status = "ok";
  rows[0].error_l1 = 0.125;
  rows[0].residual_l1 = 1e-13;
  rows[0].iterations = 31;
  rows[0].runtime_ms = std::nan("");
  rows[1].n = 9;
  rows[1].k = 32;
  rows[1].ok = false;
  rows[1].status = "InvalidArgument";
  rows[1].error_l1 = std::nan("");
  rows[1].residual_l1 = std::nan("");
  rows[1].iterations = 0;
  rows[1].runtime_ms = std::nan("");
  rows[1].message = "message with, commas and \"quotes\"";

  std::ostringstream out;
  write_sweep_csv(rows, out);
  std::string text = out.str();
  CHECK(text.find("2,16,ok,0.125,1e-13,31,,\n") != std::string::npos);
  CHECK(text.find("\"message with, commas and \"\"quotes\"\"\"") != std::string::npos);

  std::istringstream in(text);
  std::vector<SweepRow> back = read_sweep_csv(in);
  REQUIRE(back.size() == 2);
  CHECK(back[0].ok);
  CHECK(back[0].error_l1 == 0.125);
  CHECK(std::isnan(back[0].runtime_ms));
  CHECK_FALSE(back[1].ok);
  CHECK(back[1].status == "InvalidArgument");
  CHECK(std::isnan(back[1].error_l1));
  CHECK(back[1].message == "message with, commas and \"quotes\"");
}

TEST_CASE("file helpers surface IO failures") {
  CHECK_THROWS_AS(read_density_csv_file("/no/such/dir/f.csv"), Error);
  CHECK_THROWS_AS(read_matrix_csv_file("/no/such/dir/m.csv"), Error);
  DensityVector f = DensityVector::uniform(3);
  CHECK_THROWS_AS(write_density_csv(f, "/no/such/dir/f.csv"), Error);

  std::string path = std::string("/tmp/ulampc_csv_test_") +
                     std::to_string(::getpid()) + ".csv";
  write_density_csv(f, path);
  DensityVector back = read_density_csv_file(path);
  CHECK(back.values == f.values);
  std::remove(path.c_str());
}
