#include "ulampc/capi.h"

#include <cstdio>
#include <cstring>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "ulampc/analysis.hpp"
#include "ulampc/catalog.hpp"
#include "ulampc/csv.hpp"
#include "ulampc/error.hpp"
#include "ulampc/expr.hpp"
#include "ulampc/map_def.hpp"
#include "ulampc/map_model.hpp"
#include "ulampc/orbit.hpp"
#include "ulampc/solver.hpp"
#include "ulampc/truncation.hpp"
#include "ulampc/ulam.hpp"

using namespace ulampc;

struct ulampc_map {
  MapSpec spec;
  std::optional<ExactDensity> exact;
};

struct ulampc_matrix {
  UlamMatrix m;
};

struct ulampc_density {
  DensityVector f;
};

namespace {

thread_local std::string g_last_error;

ulampc_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return ULAMPC_ERR_INVALID_ARGUMENT;
    case ErrorCode::SyntaxError: return ULAMPC_ERR_SYNTAX;
    case ErrorCode::ExprDomain: return ULAMPC_ERR_EXPR_DOMAIN;
    case ErrorCode::OutOfDomain: return ULAMPC_ERR_OUT_OF_DOMAIN;
    case ErrorCode::BelowResolutionFloor: return ULAMPC_ERR_BELOW_FLOOR;
    case ErrorCode::NotInImage: return ULAMPC_ERR_NOT_IN_IMAGE;
    case ErrorCode::NotContracting: return ULAMPC_ERR_NOT_CONTRACTING;
    case ErrorCode::IndexOutOfRange: return ULAMPC_ERR_INDEX_RANGE;
    case ErrorCode::DimensionMismatch: return ULAMPC_ERR_DIMENSION;
    case ErrorCode::QuadratureFailure: return ULAMPC_ERR_QUADRATURE;
    case ErrorCode::NoConvergence: return ULAMPC_ERR_NO_CONVERGENCE;
    case ErrorCode::SingularSystem: return ULAMPC_ERR_SINGULAR;
    case ErrorCode::NegativeDensity: return ULAMPC_ERR_NEGATIVE_DENSITY;
    case ErrorCode::DegenerateOrbit: return ULAMPC_ERR_DEGENERATE_ORBIT;
    case ErrorCode::Io: return ULAMPC_ERR_IO;
  }
  return ULAMPC_ERR_UNKNOWN;
}

template <typename Fn>
ulampc_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return ULAMPC_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ULAMPC_ERR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown failure";
    return ULAMPC_ERR_UNKNOWN;
  }
}

ulampc_status require(bool cond, const char* what) {
  if (cond) return ULAMPC_OK;
  g_last_error = what;
  return ULAMPC_ERR_INVALID_ARGUMENT;
}

void copy_string(const std::string& s, char* out, size_t cap) {
  if (out == nullptr || cap == 0) return;
  size_t n = s.size() < cap - 1 ? s.size() : cap - 1;
  std::memcpy(out, s.data(), n);
  out[n] = '\0';
}

}  // namespace

extern "C" {

const char* ulampc_last_error(void) { return g_last_error.c_str(); }

const char* ulampc_status_name(ulampc_status status) {
  switch (status) {
    case ULAMPC_OK: return "ok";
    case ULAMPC_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case ULAMPC_ERR_SYNTAX: return "syntax-error";
    case ULAMPC_ERR_EXPR_DOMAIN: return "expression-domain";
    case ULAMPC_ERR_OUT_OF_DOMAIN: return "out-of-domain";
    case ULAMPC_ERR_BELOW_FLOOR: return "below-resolution-floor";
    case ULAMPC_ERR_NOT_IN_IMAGE: return "not-in-image";
    case ULAMPC_ERR_NOT_CONTRACTING: return "not-contracting";
    case ULAMPC_ERR_INDEX_RANGE: return "index-out-of-range";
    case ULAMPC_ERR_DIMENSION: return "dimension-mismatch";
    case ULAMPC_ERR_QUADRATURE: return "quadrature-failure";
    case ULAMPC_ERR_NO_CONVERGENCE: return "no-convergence";
    case ULAMPC_ERR_SINGULAR: return "singular-system";
    case ULAMPC_ERR_NEGATIVE_DENSITY: return "negative-density";
    case ULAMPC_ERR_DEGENERATE_ORBIT: return "degenerate-orbit";
    case ULAMPC_ERR_IO: return "io-error";
    case ULAMPC_ERR_UNKNOWN: return "unknown";
  }
  return "unknown";
}

/* ---- maps ------------------------------------------------------------ */

ulampc_status ulampc_map_from_catalog(const char* name, long long n_branches,
                                      ulampc_map** out) {
  if (auto s = require(name && out, "name and out must not be NULL")) return s;
  return guarded([&] {
    const CatalogEntry* entry = find_catalog_entry(name);
    if (entry == nullptr) {
      fail(ErrorCode::InvalidArgument,
           "unknown catalog map '" + std::string(name) + "'");
    }
    *out = new ulampc_map{entry->make(n_branches), entry->exact_density};
  });
}

ulampc_status ulampc_map_from_file(const char* path, long long n_branches,
                                   ulampc_map** out) {
  if (auto s = require(path && out, "path and out must not be NULL")) return s;
  return guarded([&] {
    MapDefinition def = load_map_definition(path);
    long long n = n_branches < 1 ? 40 : n_branches;
    *out = new ulampc_map{compile_map(def, n), std::nullopt};
  });
}

ulampc_status ulampc_map_from_file_floor(const char* path,
                                         double min_branch_width,
                                         ulampc_map** out) {
  if (auto s = require(path && out, "path and out must not be NULL")) return s;
  return guarded([&] {
    MapDefinition def = load_map_definition(path);
    *out = new ulampc_map{compile_map_floor(def, min_branch_width), std::nullopt};
  });
}

ulampc_status ulampc_map_from_string(const char* text, long long n_branches,
                                     ulampc_map** out) {
  if (auto s = require(text && out, "text and out must not be NULL")) return s;
  return guarded([&] {
    MapDefinition def = parse_map_definition(text);
    long long n = n_branches < 1 ? 40 : n_branches;
    *out = new ulampc_map{compile_map(def, n), std::nullopt};
  });
}

void ulampc_map_free(ulampc_map* map) { delete map; }

ulampc_status ulampc_map_eval(const ulampc_map* map, double x, double* out) {
  if (auto s = require(map && out, "map and out must not be NULL")) return s;
  return guarded([&] { *out = map->spec.eval(x); });
}

ulampc_status ulampc_map_truncate(const ulampc_map* map, long long n,
                                  ulampc_map** out) {
  if (auto s = require(map && out, "map and out must not be NULL")) return s;
  return guarded([&] {
    TruncatedMap tm = truncate(map->spec, n);
    // The base's closed-form density stays attached as the comparison
    // reference (it is the limit object the truncations approximate).
    *out = new ulampc_map{std::move(tm.spec), map->exact};
  });
}

int ulampc_map_is_countable(const ulampc_map* map) {
  return map != nullptr &&
         map->spec.class_tag() == ClassTag::CountableAccumulatingAtZero;
}

long long ulampc_map_branch_count(const ulampc_map* map) {
  return map == nullptr ? 0 : static_cast<long long>(map->spec.branches().size());
}

ulampc_status ulampc_map_partition_point(const ulampc_map* map, long long m,
                                         double* out) {
  if (auto s = require(map && out, "map and out must not be NULL")) return s;
  return guarded([&] { *out = map->spec.partition_point(m); });
}

const char* ulampc_map_name(const ulampc_map* map) {
  return map == nullptr ? "" : map->spec.name().c_str();
}

ulampc_status ulampc_map_validate(const ulampc_map* map, int samples_per_branch,
                                  long long tail_index, double tol,
                                  int* admissible, char* summary,
                                  size_t summary_cap) {
  if (auto s = require(map != nullptr, "map must not be NULL")) return s;
  return guarded([&] {
    ValidationReport report = validate(map->spec, samples_per_branch, tail_index, tol);
    if (admissible != nullptr) *admissible = report.admissible ? 1 : 0;
    if (summary != nullptr) copy_string(report.summary(), summary, summary_cap);
  });
}

ulampc_status ulampc_map_ly_constants(const ulampc_map* map, long long n,
                                      long long tail_index,
                                      double out_constants[8]) {
  if (auto s = require(map && out_constants, "map and out must not be NULL"))
    return s;
  return guarded([&] {
    LYConstants ly = ly_constants(map->spec, n, tail_index);
    out_constants[0] = static_cast<double>(ly.cutoff);
    out_constants[1] = ly.d1;
    out_constants[2] = ly.c;
    out_constants[3] = ly.d;
    out_constants[4] = ly.a_n;
    out_constants[5] = ly.contraction;
    out_constants[6] = ly.sup_bound;
    out_constants[7] = ly.last_tail_term;
  });
}

int ulampc_map_has_exact_density(const ulampc_map* map) {
  return map != nullptr && map->exact.has_value();
}

ulampc_status ulampc_map_exact_density_at(const ulampc_map* map, double x,
                                          double* out) {
  if (auto s = require(map && out, "map and out must not be NULL")) return s;
  return guarded([&] {
    if (!map->exact) {
      fail(ErrorCode::InvalidArgument,
           "map has no closed-form invariant density");
    }
    *out = (*map->exact)(x);
  });
}

/* ---- Ulam matrices ---------------------------------------------------- */

ulampc_status ulampc_matrix_assemble(const ulampc_map* map, int k, double tol,
                                     int renormalize, ulampc_matrix** out) {
  if (auto s = require(map && out, "map and out must not be NULL")) return s;
  return guarded([&] {
    *out = new ulampc_matrix{ulam_matrix(map->spec, k, tol, renormalize != 0)};
  });
}

void ulampc_matrix_free(ulampc_matrix* matrix) { delete matrix; }

int ulampc_matrix_k(const ulampc_matrix* matrix) {
  return matrix == nullptr ? 0 : matrix->m.k();
}

long long ulampc_matrix_nnz(const ulampc_matrix* matrix) {
  return matrix == nullptr ? 0 : static_cast<long long>(matrix->m.nnz());
}

double ulampc_matrix_row_defect(const ulampc_matrix* matrix) {
  return matrix == nullptr ? 0.0 : matrix->m.max_row_sum_defect();
}

ulampc_status ulampc_matrix_entry(const ulampc_matrix* matrix, int row, int col,
                                  double* out) {
  if (auto s = require(matrix && out, "matrix and out must not be NULL")) return s;
  return guarded([&] { *out = matrix->m.entry(row, col); });
}

ulampc_status ulampc_matrix_write_csv(const ulampc_matrix* matrix,
                                      const char* path) {
  if (auto s = require(matrix && path, "matrix and path must not be NULL")) return s;
  return guarded([&] { write_matrix_csv(matrix->m, std::string(path)); });
}

ulampc_status ulampc_matrix_read_csv(const char* path, ulampc_matrix** out) {
  if (auto s = require(path && out, "path and out must not be NULL")) return s;
  return guarded([&] { *out = new ulampc_matrix{read_matrix_csv_file(path)}; });
}

/* ---- densities --------------------------------------------------------- */

void ulampc_density_free(ulampc_density* density) { delete density; }

int ulampc_density_k(const ulampc_density* density) {
  return density == nullptr ? 0 : density->f.k;
}

ulampc_status ulampc_density_values(const ulampc_density* density, double* buf,
                                    size_t cap) {
  if (auto s = require(density && buf, "density and buf must not be NULL"))
    return s;
  return guarded([&] {
    size_t n = density->f.values.size() < cap ? density->f.values.size() : cap;
    std::memcpy(buf, density->f.values.data(), n * sizeof(double));
  });
}

ulampc_status ulampc_density_value_at(const ulampc_density* density, double x,
                                      double* out) {
  if (auto s = require(density && out, "density and out must not be NULL"))
    return s;
  return guarded([&] { *out = density->f.value_at(x); });
}

double ulampc_density_mass(const ulampc_density* density) {
  return density == nullptr ? 0.0 : density->f.mass();
}

ulampc_status ulampc_density_write_csv(const ulampc_density* density,
                                       const char* path) {
  if (auto s = require(density && path, "density and path must not be NULL"))
    return s;
  return guarded([&] { write_density_csv(density->f, std::string(path)); });
}

ulampc_status ulampc_density_read_csv(const char* path, ulampc_density** out) {
  if (auto s = require(path && out, "path and out must not be NULL")) return s;
  return guarded([&] { *out = new ulampc_density{read_density_csv_file(path)}; });
}

/* ---- solving ----------------------------------------------------------- */

ulampc_status ulampc_solve(const ulampc_matrix* matrix, int method, double tol,
                           long long max_iter, ulampc_density** out,
                           long long* iterations, double* residual,
                           double* monotonicity_defect) {
  if (auto s = require(matrix && out, "matrix and out must not be NULL")) return s;
  if (auto s = require(method == ULAMPC_METHOD_POWER || method == ULAMPC_METHOD_DIRECT,
                       "method must be 0 (power) or 1 (direct)"))
    return s;
  return guarded([&] {
    SolveMethod m = method == ULAMPC_METHOD_POWER ? SolveMethod::PowerCesaro
                                                  : SolveMethod::DirectNullspace;
    SolveReport rep = stationary_density(matrix->m, m, tol, max_iter);
    if (iterations != nullptr) *iterations = rep.iterations;
    if (residual != nullptr) *residual = rep.residual_l1;
    if (monotonicity_defect != nullptr) *monotonicity_defect = rep.monotonicity_defect;
    *out = new ulampc_density{std::move(rep.density)};
  });
}

/* ---- analysis ---------------------------------------------------------- */

ulampc_status ulampc_l1_between(const ulampc_density* f, const ulampc_density* g,
                                double* out) {
  if (auto s = require(f && g && out, "densities and out must not be NULL"))
    return s;
  return guarded([&] { *out = l1_between(f->f, g->f); });
}

ulampc_status ulampc_l1_vs_affine(const ulampc_density* f, double slope,
                                  double intercept, double* out) {
  if (auto s = require(f && out, "density and out must not be NULL")) return s;
  return guarded([&] {
    *out = l1_vs_exact(f->f, ExactDensity::affine(slope, intercept));
  });
}

ulampc_status ulampc_l1_vs_map_exact(const ulampc_density* f,
                                     const ulampc_map* map, double* out) {
  if (auto s = require(f && map && out, "density, map and out must not be NULL"))
    return s;
  return guarded([&] {
    if (!map->exact) {
      fail(ErrorCode::InvalidArgument,
           "map has no closed-form invariant density");
    }
    *out = l1_vs_exact(f->f, *map->exact);
  });
}

ulampc_status ulampc_fp_residual(const ulampc_map* map, const ulampc_density* f,
                                 double quad_tol, double* out) {
  if (auto s = require(map && f && out, "map, density and out must not be NULL"))
    return s;
  return guarded([&] { *out = fp_residual(map->spec, f->f, quad_tol); });
}

ulampc_status ulampc_sweep_csv(const ulampc_map* base, int use_exact,
                               const long long* n_list, size_t n_count,
                               const int* k_list, size_t k_count, int method,
                               double tol, long long max_iter, int measure_time,
                               const char* out_path) {
  if (auto s = require(base && n_list && k_list && out_path,
                       "base, n_list, k_list and out_path must not be NULL"))
    return s;
  if (auto s = require(method == ULAMPC_METHOD_POWER || method == ULAMPC_METHOD_DIRECT,
                       "method must be 0 (power) or 1 (direct)"))
    return s;
  return guarded([&] {
    std::optional<ExactDensity> exact;
    if (use_exact != 0) {
      if (!base->exact) {
        fail(ErrorCode::InvalidArgument,
             "map has no closed-form invariant density to compare against");
      }
      exact = base->exact;
    }
    SweepOptions opts;
    opts.method = method == ULAMPC_METHOD_POWER ? SolveMethod::PowerCesaro
                                                : SolveMethod::DirectNullspace;
    opts.tol = tol;
    opts.max_iter = max_iter;
    opts.measure_time = measure_time != 0;
    std::vector<SweepRow> rows =
        sweep(base->spec, exact, {n_list, n_count}, {k_list, k_count}, opts);
    write_sweep_csv(rows, std::string(out_path));
  });
}

/* ---- orbit oracle ------------------------------------------------------ */

ulampc_status ulampc_birkhoff(const ulampc_map* map, int k, long long steps,
                              long long burn_in, uint64_t seed, int starts,
                              const double* x0, ulampc_density** out,
                              long long* anomalies) {
  if (auto s = require(map && out, "map and out must not be NULL")) return s;
  return guarded([&] {
    std::optional<double> start;
    if (x0 != nullptr) start = *x0;
    OrbitHistogram h =
        birkhoff_histogram(map->spec, k, steps, burn_in, seed, starts, start);
    if (anomalies != nullptr) *anomalies = h.anomalies;
    *out = new ulampc_density{h.density()};
  });
}

/* ---- expressions -------------------------------------------------------- */

ulampc_status ulampc_expr_roundtrip(const char* text, char* out, size_t cap) {
  if (auto s = require(text && out, "text and out must not be NULL")) return s;
  return guarded([&] { copy_string(print_expr(parse_expr(text)), out, cap); });
}

ulampc_status ulampc_expr_eval(const char* text, double x, long long i,
                               double* out) {
  if (auto s = require(text && out, "text and out must not be NULL")) return s;
  return guarded([&] { *out = eval_expr(parse_expr(text), x, i); });
}

/* ---- catalog ------------------------------------------------------------ */

long long ulampc_catalog_count(void) {
  return static_cast<long long>(catalog().size());
}

ulampc_status ulampc_catalog_name(long long index, char* out, size_t cap) {
  if (auto s = require(out != nullptr, "out must not be NULL")) return s;
  return guarded([&] {
    const auto& entries = catalog();
    if (index < 0 || index >= static_cast<long long>(entries.size())) {
      fail(ErrorCode::IndexOutOfRange,
           "catalog index " + std::to_string(index) + " out of range");
    }
    copy_string(entries[static_cast<std::size_t>(index)].name, out, cap);
  });
}

}  // extern "C"
