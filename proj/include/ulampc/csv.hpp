#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ulampc/analysis.hpp"
#include "ulampc/ulam.hpp"

namespace ulampc {

// All writers emit deterministic text: shortest round-tripping decimals,
// LF line endings, no timestamps.  Every writer has a matching reader that
// reconstructs the value losslessly.

// Sparse matrix: "# k=<k> assembly_tol=<tol>" then "row,col,value" triples,
// 1-based, row-major.
void write_matrix_csv(const UlamMatrix& matrix, std::ostream& out);
void write_matrix_csv(const UlamMatrix& matrix, const std::string& path);
UlamMatrix read_matrix_csv(std::istream& in);
UlamMatrix read_matrix_csv_file(const std::string& path);

// Density: "# k=<k>" then "cell,left,right,value" rows for every cell.
void write_density_csv(const DensityVector& density, std::ostream& out);
void write_density_csv(const DensityVector& density, const std::string& path);
DensityVector read_density_csv(std::istream& in);
DensityVector read_density_csv_file(const std::string& path);

// Sweep table: "n,k,status,error_l1,residual_l1,iterations,runtime_ms,message".
// NaN fields (unmeasured runtimes, the reference-free first row) are written
// empty and read back as NaN.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);
std::vector<SweepRow> read_sweep_csv(std::istream& in);
std::vector<SweepRow> read_sweep_csv_file(const std::string& path);

}  // namespace ulampc
