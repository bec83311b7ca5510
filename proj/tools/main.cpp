#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ulampc/capi.h"

namespace {

// RAII wrappers over the C handles.
struct Map {
  ulampc_map* p = nullptr;
  ~Map() { ulampc_map_free(p); }
  Map() = default;
  Map(Map&& o) noexcept : p(o.p) { o.p = nullptr; }
  Map& operator=(Map&&) = delete;
  Map(const Map&) = delete;
};

struct Matrix {
  ulampc_matrix* p = nullptr;
  ~Matrix() { ulampc_matrix_free(p); }
};

struct Density {
  ulampc_density* p = nullptr;
  ~Density() { ulampc_density_free(p); }
};

int exit_code_for(ulampc_status s) {
  switch (s) {
    case ULAMPC_OK:
      return 0;
    case ULAMPC_ERR_QUADRATURE:
    case ULAMPC_ERR_NO_CONVERGENCE:
    case ULAMPC_ERR_SINGULAR:
    case ULAMPC_ERR_NEGATIVE_DENSITY:
    case ULAMPC_ERR_DEGENERATE_ORBIT:
      return 2;  // numerical failure
    default:
      return 1;  // input / validation failure
  }
}

// Prints the library error and exits with the mapped code.
void check(ulampc_status s) {
  if (s == ULAMPC_OK) return;
  std::fprintf(stderr, "error: %s (%s)\n", ulampc_last_error(),
               ulampc_status_name(s));
  std::exit(exit_code_for(s));
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Resolves --map: a catalog name, else a definition file path.
Map open_map(const std::string& src, long long n_branches) {
  Map map;
  ulampc_status s = ulampc_map_from_catalog(src.c_str(), n_branches, &map.p);
  if (s == ULAMPC_OK) return map;
  std::string catalog_err = ulampc_last_error();
  s = ulampc_map_from_file(src.c_str(), n_branches, &map.p);
  if (s == ULAMPC_OK) return map;
  std::fprintf(stderr, "error: cannot resolve --map '%s': %s; as a file: %s\n",
               src.c_str(), catalog_err.c_str(), ulampc_last_error());
  std::exit(1);
}

// Countable maps get truncated to n branches; finite maps are used as-is.
Map working_map(const std::string& src, long long n) {
  long long materialize = n + 8 > 40 ? n + 8 : 40;
  Map base = open_map(src, materialize);
  if (!ulampc_map_is_countable(base.p)) return base;
  Map truncated;
  check(ulampc_map_truncate(base.p, n, &truncated.p));
  return truncated;
}

struct CommonOpts {
  std::string map_src;
  long long n = 10;
  int k = 1000;
  std::string method = "power";
  double tol = 1e-12;
  long long max_iter = 100000;
};

int method_code(const std::string& method) {
  if (method == "power") return ULAMPC_METHOD_POWER;
  if (method == "direct") return ULAMPC_METHOD_DIRECT;
  std::fprintf(stderr, "error: --method must be 'power' or 'direct'\n");
  std::exit(64);
}

std::vector<long long> parse_ll_list(const std::string& text) {
  std::vector<long long> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string tok = text.substr(pos, comma == std::string::npos
                                           ? std::string::npos
                                           : comma - pos);
    if (tok.empty()) {
      std::fprintf(stderr, "error: empty entry in list '%s'\n", text.c_str());
      std::exit(64);
    }
    out.push_back(std::atoll(tok.c_str()));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Stationary densities of interval maps via truncation and Ulam's "
      "method.\nSet ULAM_THREADS to cap matrix-assembly workers."};
  app.require_subcommand(1);

  // ---- validate -----------------------------------------------------------
  std::string v_map;
  long long v_branches = 40;
  int v_samples = 64;
  long long v_tail = 1000000;
  double v_tol = 1e-9;
  auto* validate_cmd =
      app.add_subcommand("validate", "Check the map class conditions");
  validate_cmd->add_option("--map", v_map, "catalog name or definition file")
      ->required();
  validate_cmd->add_option("--n-branches", v_branches,
                           "branches to materialize for countable maps");
  validate_cmd->add_option("--samples", v_samples, "sample points per branch");
  validate_cmd->add_option("--tail-index", v_tail, "how far to sum slope tails");
  validate_cmd->add_option("--tol", v_tol, "tolerance for the branch checks");
  validate_cmd->callback([&] {
    Map map = open_map(v_map, v_branches);
    int admissible = 0;
    std::vector<char> summary(1 << 16);
    check(ulampc_map_validate(map.p, v_samples, v_tail, v_tol, &admissible,
                              summary.data(), summary.size()));
    std::fputs(summary.data(), stdout);
    std::exit(admissible ? 0 : 1);
  });

  // ---- truncate -----------------------------------------------------------
  std::string t_map;
  long long t_n = 10;
  auto* truncate_cmd =
      app.add_subcommand("truncate", "Report the n-th truncation of a map");
  truncate_cmd->add_option("--map", t_map, "catalog name or definition file")
      ->required();
  truncate_cmd->add_option("--n", t_n, "truncation level")->required();
  truncate_cmd->callback([&] {
    long long materialize = t_n + 8 > 40 ? t_n + 8 : 40;
    Map base = open_map(t_map, materialize);
    if (!ulampc_map_is_countable(base.p)) {
      std::fprintf(stderr, "error: '%s' is already finite\n", t_map.c_str());
      std::exit(1);
    }
    double a_n = 0.0;
    check(ulampc_map_partition_point(base.p, t_n, &a_n));
    Map tr;
    check(ulampc_map_truncate(base.p, t_n, &tr.p));
    std::printf("map = %s\n", ulampc_map_name(base.p));
    std::printf("n = %lld\n", t_n);
    std::printf("a_n = %s\n", fmt(a_n).c_str());
    std::printf("linear_slope = %s\n", fmt(1.0 / a_n).c_str());
    std::printf("branches = %lld\n", ulampc_map_branch_count(tr.p));
    double c[8];
    ulampc_status s = ulampc_map_ly_constants(base.p, t_n, 1000000, c);
    if (s == ULAMPC_OK) {
      std::printf("cutoff_n = %lld\n", static_cast<long long>(c[0]));
      std::printf("d1 = %s\n", fmt(c[1]).c_str());
      std::printf("c = %s\n", fmt(c[2]).c_str());
      std::printf("d = %s\n", fmt(c[3]).c_str());
      std::printf("contraction = %s\n", fmt(c[5]).c_str());
      std::printf("sup_bound = %s\n", fmt(c[6]).c_str());
    } else {
      std::printf("sup_bound = unavailable (%s)\n", ulampc_last_error());
    }
  });

  // ---- matrix ---------------------------------------------------------------
  CommonOpts m_opts;
  double m_tol = 1e-12;
  bool m_renorm = false;
  std::string m_out;
  auto* matrix_cmd =
      app.add_subcommand("matrix", "Assemble the Ulam matrix of a truncation");
  matrix_cmd->add_option("--map", m_opts.map_src, "catalog name or definition file")
      ->required();
  matrix_cmd->add_option("--n", m_opts.n, "truncation level")->required();
  matrix_cmd->add_option("--k", m_opts.k, "number of cells")->required();
  matrix_cmd->add_option("--tol", m_tol, "branch-inversion tolerance");
  matrix_cmd->add_flag("--renormalize", m_renorm, "rescale rows to sum exactly 1");
  matrix_cmd->add_option("--out", m_out, "output CSV path")->required();
  matrix_cmd->callback([&] {
    Map map = working_map(m_opts.map_src, m_opts.n);
    Matrix matrix;
    check(ulampc_matrix_assemble(map.p, m_opts.k, m_tol, m_renorm ? 1 : 0,
                                 &matrix.p));
    check(ulampc_matrix_write_csv(matrix.p, m_out.c_str()));
    std::printf("k = %d\n", ulampc_matrix_k(matrix.p));
    std::printf("nnz = %lld\n", ulampc_matrix_nnz(matrix.p));
    std::printf("row_defect = %s\n", fmt(ulampc_matrix_row_defect(matrix.p)).c_str());
    std::printf("out = %s\n", m_out.c_str());
  });

  // ---- solve ----------------------------------------------------------------
  CommonOpts s_opts;
  std::string s_out;
  auto* solve_cmd =
      app.add_subcommand("solve", "Solve for the stationary Ulam density");
  solve_cmd->add_option("--map", s_opts.map_src, "catalog name or definition file")
      ->required();
  solve_cmd->add_option("--n", s_opts.n, "truncation level")->required();
  solve_cmd->add_option("--k", s_opts.k, "number of cells")->required();
  solve_cmd->add_option("--method", s_opts.method, "power | direct");
  solve_cmd->add_option("--tol", s_opts.tol, "solver tolerance");
  solve_cmd->add_option("--max-iter", s_opts.max_iter, "iteration cap");
  solve_cmd->add_option("--out", s_out, "output CSV path")->required();
  solve_cmd->callback([&] {
    Map map = working_map(s_opts.map_src, s_opts.n);
    Matrix matrix;
    check(ulampc_matrix_assemble(map.p, s_opts.k, 1e-12, 0, &matrix.p));
    Density density;
    long long iterations = 0;
    double residual = 0.0;
    double defect = 0.0;
    check(ulampc_solve(matrix.p, method_code(s_opts.method), s_opts.tol,
                       s_opts.max_iter, &density.p, &iterations, &residual,
                       &defect));
    check(ulampc_density_write_csv(density.p, s_out.c_str()));
    std::printf("method = %s\n", s_opts.method.c_str());
    std::printf("iterations = %lld\n", iterations);
    std::printf("residual_l1 = %s\n", fmt(residual).c_str());
    std::printf("monotonicity_defect = %s\n", fmt(defect).c_str());
    std::printf("mass = %s\n", fmt(ulampc_density_mass(density.p)).c_str());
    if (ulampc_map_has_exact_density(map.p)) {
      double err = 0.0;
      check(ulampc_l1_vs_map_exact(density.p, map.p, &err));
      std::printf("error_l1_vs_exact = %s\n", fmt(err).c_str());
    }
    std::printf("out = %s\n", s_out.c_str());
  });

  // ---- error ------------------------------------------------------------------
  CommonOpts e_opts;
  std::string e_exact;
  auto* error_cmd = app.add_subcommand(
      "error", "L1 error of the Ulam density against a closed-form density");
  error_cmd->add_option("--map", e_opts.map_src, "catalog name or definition file")
      ->required();
  error_cmd->add_option("--n", e_opts.n, "truncation level")->required();
  error_cmd->add_option("--k", e_opts.k, "number of cells")->required();
  error_cmd->add_option("--method", e_opts.method, "power | direct");
  error_cmd->add_option("--tol", e_opts.tol, "solver tolerance");
  error_cmd->add_option("--max-iter", e_opts.max_iter, "iteration cap");
  error_cmd->add_option("--exact", e_exact,
                        "catalog map whose exact density is the reference "
                        "(default: the map's own)");
  error_cmd->callback([&] {
    Map map = working_map(e_opts.map_src, e_opts.n);
    Matrix matrix;
    check(ulampc_matrix_assemble(map.p, e_opts.k, 1e-12, 0, &matrix.p));
    Density density;
    long long iterations = 0;
    double residual = 0.0;
    check(ulampc_solve(matrix.p, method_code(e_opts.method), e_opts.tol,
                       e_opts.max_iter, &density.p, &iterations, &residual,
                       nullptr));
    double err = 0.0;
    if (!e_exact.empty()) {
      Map ref = open_map(e_exact, 1);
      check(ulampc_l1_vs_map_exact(density.p, ref.p, &err));
    } else {
      check(ulampc_l1_vs_map_exact(density.p, map.p, &err));
    }
    std::printf("n = %lld\n", e_opts.n);
    std::printf("k = %d\n", e_opts.k);
    std::printf("iterations = %lld\n", iterations);
    std::printf("residual_l1 = %s\n", fmt(residual).c_str());
    std::printf("error_l1 = %s\n", fmt(err).c_str());
  });

  // ---- sweep ------------------------------------------------------------------
  std::string w_map;
  std::string w_nlist;
  std::string w_klist;
  std::string w_out;
  std::string w_method = "power";
  std::string w_compare = "auto";
  double w_tol = 1e-12;
  long long w_max_iter = 100000;
  bool w_timings = false;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Error table over truncation levels and grids");
  sweep_cmd->add_option("--map", w_map, "catalog name or definition file")
      ->required();
  sweep_cmd->add_option("--n-list", w_nlist, "comma-separated truncation levels")
      ->required();
  sweep_cmd->add_option("--k-list", w_klist, "comma-separated cell counts")
      ->required();
  sweep_cmd->add_option("--out", w_out, "output CSV path")->required();
  sweep_cmd->add_option("--method", w_method, "power | direct");
  sweep_cmd->add_option("--tol", w_tol, "solver tolerance");
  sweep_cmd->add_option("--max-iter", w_max_iter, "iteration cap");
  sweep_cmd->add_option("--compare", w_compare,
                        "exact | previous | auto (exact when available)");
  sweep_cmd->add_flag("--timings", w_timings,
                      "fill runtime_ms (off keeps output byte-deterministic)");
  sweep_cmd->callback([&] {
    std::vector<long long> n_list = parse_ll_list(w_nlist);
    std::vector<long long> k_ll = parse_ll_list(w_klist);
    std::vector<int> k_list;
    for (long long k : k_ll) k_list.push_back(static_cast<int>(k));
    long long n_max = 1;
    for (long long n : n_list) n_max = n > n_max ? n : n_max;
    Map base = open_map(w_map, n_max + 8 > 40 ? n_max + 8 : 40);
    int use_exact;
    if (w_compare == "exact") {
      use_exact = 1;
    } else if (w_compare == "previous") {
      use_exact = 0;
    } else if (w_compare == "auto") {
      use_exact = ulampc_map_has_exact_density(base.p) ? 1 : 0;
    } else {
      std::fprintf(stderr, "error: --compare must be exact, previous or auto\n");
      std::exit(64);
    }
    check(ulampc_sweep_csv(base.p, use_exact, n_list.data(), n_list.size(),
                           k_list.data(), k_list.size(), method_code(w_method),
                           w_tol, w_max_iter, w_timings ? 1 : 0, w_out.c_str()));
    std::printf("rows = %zu\n", n_list.size() * k_list.size());
    std::printf("out = %s\n", w_out.c_str());
  });

  // ---- oracle -----------------------------------------------------------------
  std::string o_map;
  long long o_n = 10;
  int o_k = 100;
  long long o_steps = 1000000;
  long long o_burn = 1000;
  std::uint64_t o_seed = 12345;
  int o_starts = 8;
  double o_x0 = -1.0;
  std::string o_out;
  auto* oracle_cmd = app.add_subcommand(
      "oracle", "Monte-Carlo orbit histogram (independent of the Ulam pipeline)");
  oracle_cmd->add_option("--map", o_map, "catalog name or definition file")
      ->required();
  oracle_cmd->add_option("--n", o_n, "truncation level")->required();
  oracle_cmd->add_option("--k", o_k, "number of cells")->required();
  oracle_cmd->add_option("--steps", o_steps, "total orbit steps")->required();
  oracle_cmd->add_option("--seed", o_seed, "RNG seed");
  oracle_cmd->add_option("--burn-in", o_burn, "steps discarded per start");
  oracle_cmd->add_option("--starts", o_starts, "independent orbit starts");
  oracle_cmd->add_option("--x0", o_x0, "first start point (default: seeded draw)");
  oracle_cmd->add_option("--out", o_out, "density CSV path");
  oracle_cmd->callback([&] {
    Map map = working_map(o_map, o_n);
    Density density;
    long long anomalies = 0;
    const double* x0 = o_x0 >= 0.0 ? &o_x0 : nullptr;
    check(ulampc_birkhoff(map.p, o_k, o_steps, o_burn, o_seed, o_starts, x0,
                          &density.p, &anomalies));
    std::printf("steps = %lld\n", o_steps);
    std::printf("seed = %" PRIu64 "\n", o_seed);
    std::printf("anomalies = %lld\n", anomalies);
    std::printf("mass = %s\n", fmt(ulampc_density_mass(density.p)).c_str());
    if (ulampc_map_has_exact_density(map.p)) {
      double err = 0.0;
      check(ulampc_l1_vs_map_exact(density.p, map.p, &err));
      std::printf("error_l1_vs_exact = %s\n", fmt(err).c_str());
    }
    if (!o_out.empty()) {
      check(ulampc_density_write_csv(density.p, o_out.c_str()));
      std::printf("out = %s\n", o_out.c_str());
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    std::fprintf(stderr, "%s\n", app.help().c_str());
    return 64;
  }
  return 0;
}
