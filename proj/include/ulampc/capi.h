#ifndef ULAMPC_CAPI_H
#define ULAMPC_CAPI_H

/* C interface to the ulampc library.  All entry points return a
 * ulampc_status; results come back through out-parameters.  On any
 * non-OK status, ulampc_last_error() returns a thread-local message
 * describing what went wrong.  Handles are created by the *_from_* /
 * assemble / solve calls and released with the matching *_free; freeing
 * NULL is a no-op.  Matrix and density indices are 0-based here (the CSV
 * files use 1-based cell labels). */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ULAMPC_API __declspec(dllexport)
#else
#define ULAMPC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ulampc_status {
  ULAMPC_OK = 0,
  ULAMPC_ERR_INVALID_ARGUMENT = 1,
  ULAMPC_ERR_SYNTAX = 2,
  ULAMPC_ERR_EXPR_DOMAIN = 3,
  ULAMPC_ERR_OUT_OF_DOMAIN = 4,
  ULAMPC_ERR_BELOW_FLOOR = 5,
  ULAMPC_ERR_NOT_IN_IMAGE = 6,
  ULAMPC_ERR_NOT_CONTRACTING = 7,
  ULAMPC_ERR_INDEX_RANGE = 8,
  ULAMPC_ERR_DIMENSION = 9,
  ULAMPC_ERR_QUADRATURE = 10,
  ULAMPC_ERR_NO_CONVERGENCE = 11,
  ULAMPC_ERR_SINGULAR = 12,
  ULAMPC_ERR_NEGATIVE_DENSITY = 13,
  ULAMPC_ERR_DEGENERATE_ORBIT = 14,
  ULAMPC_ERR_IO = 15,
  ULAMPC_ERR_UNKNOWN = 16
} ulampc_status;

typedef struct ulampc_map ulampc_map;
typedef struct ulampc_matrix ulampc_matrix;
typedef struct ulampc_density ulampc_density;

ULAMPC_API const char* ulampc_last_error(void);
ULAMPC_API const char* ulampc_status_name(ulampc_status status);

/* ---- maps ------------------------------------------------------------ */

/* Builds a catalog map ("example1", "example2", "identity", "doubling").
 * n_branches sets how many branches countable maps materialize (<= 0 picks
 * the default of 40); finite maps ignore it. */
ULAMPC_API ulampc_status ulampc_map_from_catalog(const char* name,
                                                 long long n_branches,
                                                 ulampc_map** out);
/* Compiles a map definition file. */
ULAMPC_API ulampc_status ulampc_map_from_file(const char* path,
                                              long long n_branches,
                                              ulampc_map** out);
/* Same, materializing branches down to the given minimum width. */
ULAMPC_API ulampc_status ulampc_map_from_file_floor(const char* path,
                                                    double min_branch_width,
                                                    ulampc_map** out);
/* Compiles a definition held in a string. */
ULAMPC_API ulampc_status ulampc_map_from_string(const char* text,
                                                long long n_branches,
                                                ulampc_map** out);
ULAMPC_API void ulampc_map_free(ulampc_map* map);

ULAMPC_API ulampc_status ulampc_map_eval(const ulampc_map* map, double x,
                                         double* out);
/* n-th truncation of a countable map; the result is a finite-branch map. */
ULAMPC_API ulampc_status ulampc_map_truncate(const ulampc_map* map, long long n,
                                             ulampc_map** out);
ULAMPC_API int ulampc_map_is_countable(const ulampc_map* map);
ULAMPC_API long long ulampc_map_branch_count(const ulampc_map* map);
ULAMPC_API ulampc_status ulampc_map_partition_point(const ulampc_map* map,
                                                    long long m, double* out);
ULAMPC_API const char* ulampc_map_name(const ulampc_map* map);

/* Checks the class conditions branch by branch plus the slope tail sums.
 * admissible gets 0/1; the human-readable report is copied into summary
 * (truncated to summary_cap - 1 characters). */
ULAMPC_API ulampc_status ulampc_map_validate(const ulampc_map* map,
                                             int samples_per_branch,
                                             long long tail_index, double tol,
                                             int* admissible, char* summary,
                                             size_t summary_cap);

/* Lasota-Yorke constants for truncation level n, written into out_constants:
 * [0] cutoff N, [1] d1, [2] c, [3] d, [4] a_n, [5] a_n + d1,
 * [6] sup bound d/(1-(a_n+d1)), [7] last tail term. */
ULAMPC_API ulampc_status ulampc_map_ly_constants(const ulampc_map* map,
                                                 long long n,
                                                 long long tail_index,
                                                 double out_constants[8]);

/* 1 when the map carries a closed-form invariant density (catalog maps and
 * their truncations). */
ULAMPC_API int ulampc_map_has_exact_density(const ulampc_map* map);
ULAMPC_API ulampc_status ulampc_map_exact_density_at(const ulampc_map* map,
                                                     double x, double* out);

/* ---- Ulam matrices ---------------------------------------------------- */

ULAMPC_API ulampc_status ulampc_matrix_assemble(const ulampc_map* map, int k,
                                                double tol, int renormalize,
                                                ulampc_matrix** out);
ULAMPC_API void ulampc_matrix_free(ulampc_matrix* matrix);
ULAMPC_API int ulampc_matrix_k(const ulampc_matrix* matrix);
ULAMPC_API long long ulampc_matrix_nnz(const ulampc_matrix* matrix);
ULAMPC_API double ulampc_matrix_row_defect(const ulampc_matrix* matrix);
ULAMPC_API ulampc_status ulampc_matrix_entry(const ulampc_matrix* matrix,
                                             int row, int col, double* out);
ULAMPC_API ulampc_status ulampc_matrix_write_csv(const ulampc_matrix* matrix,
                                                 const char* path);
ULAMPC_API ulampc_status ulampc_matrix_read_csv(const char* path,
                                                ulampc_matrix** out);

/* ---- densities --------------------------------------------------------- */

ULAMPC_API void ulampc_density_free(ulampc_density* density);
ULAMPC_API int ulampc_density_k(const ulampc_density* density);
/* Copies min(cap, k) cell heights into buf. */
ULAMPC_API ulampc_status ulampc_density_values(const ulampc_density* density,
                                               double* buf, size_t cap);
ULAMPC_API ulampc_status ulampc_density_value_at(const ulampc_density* density,
                                                 double x, double* out);
ULAMPC_API double ulampc_density_mass(const ulampc_density* density);
ULAMPC_API ulampc_status ulampc_density_write_csv(const ulampc_density* density,
                                                  const char* path);
ULAMPC_API ulampc_status ulampc_density_read_csv(const char* path,
                                                 ulampc_density** out);

/* ---- solving ----------------------------------------------------------- */

#define ULAMPC_METHOD_POWER 0
#define ULAMPC_METHOD_DIRECT 1

/* Stationary density of the matrix.  Any of iterations / residual /
 * monotonicity_defect may be NULL. */
ULAMPC_API ulampc_status ulampc_solve(const ulampc_matrix* matrix, int method,
                                      double tol, long long max_iter,
                                      ulampc_density** out,
                                      long long* iterations, double* residual,
                                      double* monotonicity_defect);

/* ---- analysis ---------------------------------------------------------- */

ULAMPC_API ulampc_status ulampc_l1_between(const ulampc_density* f,
                                           const ulampc_density* g, double* out);
ULAMPC_API ulampc_status ulampc_l1_vs_affine(const ulampc_density* f,
                                             double slope, double intercept,
                                             double* out);
/* L1 distance to the map's closed-form invariant density. */
ULAMPC_API ulampc_status ulampc_l1_vs_map_exact(const ulampc_density* f,
                                                const ulampc_map* map,
                                                double* out);
ULAMPC_API ulampc_status ulampc_fp_residual(const ulampc_map* map,
                                            const ulampc_density* f,
                                            double quad_tol, double* out);

/* Truncation/refinement sweep over a countable base written straight to CSV.
 * use_exact != 0 compares against the map's closed-form density (required to
 * be present then); otherwise successive rows are compared to each other.
 * measure_time != 0 fills the runtime_ms column (off keeps output
 * byte-deterministic). */
ULAMPC_API ulampc_status ulampc_sweep_csv(const ulampc_map* base, int use_exact,
                                          const long long* n_list,
                                          size_t n_count, const int* k_list,
                                          size_t k_count, int method,
                                          double tol, long long max_iter,
                                          int measure_time,
                                          const char* out_path);

/* ---- orbit oracle ------------------------------------------------------ */

/* Monte-Carlo density estimate from `starts` orbits (x0 may be NULL for
 * seeded uniform starts).  anomalies may be NULL. */
ULAMPC_API ulampc_status ulampc_birkhoff(const ulampc_map* map, int k,
                                         long long steps, long long burn_in,
                                         uint64_t seed, int starts,
                                         const double* x0,
                                         ulampc_density** out,
                                         long long* anomalies);

/* ---- expressions -------------------------------------------------------- */

/* Parses and re-prints an expression in canonical form. */
ULAMPC_API ulampc_status ulampc_expr_roundtrip(const char* text, char* out,
                                               size_t cap);
ULAMPC_API ulampc_status ulampc_expr_eval(const char* text, double x,
                                          long long i, double* out);

/* ---- catalog ------------------------------------------------------------ */

ULAMPC_API long long ulampc_catalog_count(void);
ULAMPC_API ulampc_status ulampc_catalog_name(long long index, char* out,
                                             size_t cap);

#ifdef __cplusplus
}
#endif

#endif /* ULAMPC_CAPI_H */
