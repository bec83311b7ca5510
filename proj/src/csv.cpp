#include "ulampc/csv.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ulampc/error.hpp"
#include "ulampc/numfmt.hpp"

namespace ulampc {

namespace {

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> csv_split(const std::string& line, int line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) {
    fail(ErrorCode::Io, "line " + std::to_string(line_no) + ": unterminated quote");
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string nan_blank(double v) {
  return std::isnan(v) ? std::string() : format_double(v);
}

// "key=value" pieces of a "# ..." metadata line.
long long meta_int(const std::string& line, const std::string& key, int line_no) {
  std::string token = key + "=";
  std::size_t pos = line.find(token);
  if (pos == std::string::npos) {
    fail(ErrorCode::Io,
         "line " + std::to_string(line_no) + ": missing '" + key + "=' in header");
  }
  std::size_t start = pos + token.size();
  std::size_t end = line.find(' ', start);
  return parse_int(line.substr(start, end == std::string::npos ? std::string::npos
                                                               : end - start));
}

double meta_double(const std::string& line, const std::string& key, int line_no) {
  std::string token = key + "=";
  std::size_t pos = line.find(token);
  if (pos == std::string::npos) {
    fail(ErrorCode::Io,
         "line " + std::to_string(line_no) + ": missing '" + key + "=' in header");
  }
  std::size_t start = pos + token.size();
  std::size_t end = line.find(' ', start);
  return parse_double(line.substr(start, end == std::string::npos ? std::string::npos
                                                                  : end - start));
}

std::string next_line(std::istream& in, int& line_no, bool required) {
  std::string line;
  if (!std::getline(in, line)) {
    if (required) fail(ErrorCode::Io, "unexpected end of input");
    return {};
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  ++line_no;
  return line;
}

template <typename Fn>
auto with_output_file(const std::string& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write '" + path + "'");
  fn(out);
  out.flush();
  if (!out) fail(ErrorCode::Io, "write to '" + path + "' failed");
}

template <typename Fn>
auto with_input_file(const std::string& path, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  return fn(in);
}

}  // namespace

// ---------------------------------------------------------------------------
// matrix

void write_matrix_csv(const UlamMatrix& matrix, std::ostream& out) {
  out << "# k=" << matrix.k() << " assembly_tol=" << format_double(matrix.assembly_tol())
      << "\n";
  out << "row,col,value\n";
  for (int row = 0; row < matrix.k(); ++row) {
    auto cols = matrix.row_cols(row);
    auto vals = matrix.row_values(row);
    for (std::size_t idx = 0; idx < cols.size(); ++idx) {
      out << (row + 1) << ',' << (cols[idx] + 1) << ',' << format_double(vals[idx])
          << "\n";
    }
  }
}

UlamMatrix read_matrix_csv(std::istream& in) {
  int line_no = 0;
  std::string header = next_line(in, line_no, true);
  if (header.empty() || header[0] != '#') {
    fail(ErrorCode::Io, "matrix CSV must start with a '# k=...' header");
  }
  long long k = meta_int(header, "k", line_no);
  double tol = meta_double(header, "assembly_tol", line_no);
  std::string columns = next_line(in, line_no, true);
  if (columns != "row,col,value") {
    fail(ErrorCode::Io, "line " + std::to_string(line_no) +
                            ": expected 'row,col,value', got '" + columns + "'");
  }
  std::vector<UlamMatrix::Triplet> triplets;
  for (;;) {
    std::string line = next_line(in, line_no, false);
    if (line.empty()) break;
    auto fields = csv_split(line, line_no);
    if (fields.size() != 3) {
      fail(ErrorCode::Io, "line " + std::to_string(line_no) + ": expected 3 fields");
    }
    triplets.push_back({static_cast<int>(parse_int(fields[0])) - 1,
                        static_cast<int>(parse_int(fields[1])) - 1,
                        parse_double(fields[2])});
  }
  return UlamMatrix::from_triplets(static_cast<int>(k), std::move(triplets), tol);
}

void write_matrix_csv(const UlamMatrix& matrix, const std::string& path) {
  with_output_file(path, [&](std::ostream& out) { write_matrix_csv(matrix, out); });
}

UlamMatrix read_matrix_csv_file(const std::string& path) {
  return with_input_file(path, [](std::istream& in) { return read_matrix_csv(in); });
}

// ---------------------------------------------------------------------------
// density

void write_density_csv(const DensityVector& density, std::ostream& out) {
  out << "# k=" << density.k << "\n";
  out << "cell,left,right,value\n";
  for (int i = 1; i <= density.k; ++i) {
    out << i << ',' << format_double(static_cast<double>(i - 1) / density.k) << ','
        << format_double(static_cast<double>(i) / density.k) << ','
        << format_double(density.values[static_cast<std::size_t>(i) - 1]) << "\n";
  }
}

DensityVector read_density_csv(std::istream& in) {
  int line_no = 0;
  std::string header = next_line(in, line_no, true);
  if (header.empty() || header[0] != '#') {
    fail(ErrorCode::Io, "density CSV must start with a '# k=...' header");
  }
  long long k = meta_int(header, "k", line_no);
  std::string columns = next_line(in, line_no, true);
  if (columns != "cell,left,right,value") {
    fail(ErrorCode::Io, "line " + std::to_string(line_no) +
                            ": expected 'cell,left,right,value', got '" + columns + "'");
  }
  DensityVector f{static_cast<int>(k),
                  std::vector<double>(static_cast<std::size_t>(k), 0.0)};
  for (long long i = 1; i <= k; ++i) {
    std::string line = next_line(in, line_no, true);
    auto fields = csv_split(line, line_no);
    if (fields.size() != 4) {
      fail(ErrorCode::Io, "line " + std::to_string(line_no) + ": expected 4 fields");
    }
    long long cell = parse_int(fields[0]);
    if (cell != i) {
      fail(ErrorCode::Io, "line " + std::to_string(line_no) + ": expected cell " +
                              std::to_string(i));
    }
    f.values[static_cast<std::size_t>(i) - 1] = parse_double(fields[3]);
  }
  return f;
}

void write_density_csv(const DensityVector& density, const std::string& path) {
  with_output_file(path, [&](std::ostream& out) { write_density_csv(density, out); });
}

DensityVector read_density_csv_file(const std::string& path) {
  return with_input_file(path, [](std::istream& in) { return read_density_csv(in); });
}

// ---------------------------------------------------------------------------
// sweep

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "n,k,status,error_l1,residual_l1,iterations,runtime_ms,message\n";
  for (const SweepRow& r : rows) {
    out << r.n << ',' << r.k << ',' << csv_quote(r.status) << ','
        << nan_blank(r.error_l1) << ',' << nan_blank(r.residual_l1) << ','
        << r.iterations << ',' << nan_blank(r.runtime_ms) << ','
        << csv_quote(r.message) << "\n";
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  int line_no = 0;
  std::string columns = next_line(in, line_no, true);
  if (columns != "n,k,status,error_l1,residual_l1,iterations,runtime_ms,message") {
    fail(ErrorCode::Io, "unexpected sweep CSV header '" + columns + "'");
  }
  std::vector<SweepRow> rows;
  for (;;) {
    std::string line = next_line(in, line_no, false);
    if (line.empty()) break;
    auto fields = csv_split(line, line_no);
    if (fields.size() != 8) {
      fail(ErrorCode::Io, "line " + std::to_string(line_no) + ": expected 8 fields");
    }
    SweepRow r;
    r.n = parse_int(fields[0]);
    r.k = static_cast<int>(parse_int(fields[1]));
    r.status = fields[2];
    r.ok = r.status == "ok";
    r.error_l1 = parse_double(fields[3]);
    r.residual_l1 = parse_double(fields[4]);
    r.iterations = parse_int(fields[5]);
    r.runtime_ms = parse_double(fields[6]);
    r.message = fields[7];
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  with_output_file(path, [&](std::ostream& out) { write_sweep_csv(rows, out); });
}

std::vector<SweepRow> read_sweep_csv_file(const std::string& path) {
  return with_input_file(path, [](std::istream& in) { return read_sweep_csv(in); });
}

}  // namespace ulampc
