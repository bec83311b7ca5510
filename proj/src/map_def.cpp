#include "ulampc/map_def.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "ulampc/error.hpp"
#include "ulampc/numfmt.hpp"

namespace ulampc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void syntax_fail(int line, const std::string& what) {
  fail(ErrorCode::SyntaxError, "line " + std::to_string(line) + ": " + what);
}

double constant_value(ExprPtr e, int line, const char* role) {
  if (expr_uses_x(e) || expr_uses_i(e)) {
    syntax_fail(line, std::string(role) + " must be a constant expression");
  }
  return eval_expr(e, 0.0, 0);
}

ExprPtr parse_at(std::string_view text, int line) {
  try {
    return parse_expr(text);
  } catch (const Error& e) {
    syntax_fail(line, e.what());
  }
}

}  // namespace

MapDefinition parse_map_definition(std::string_view text) {
  MapDefinition def;
  bool saw_class = false;
  std::map<long long, ExplicitBranchDef> numbered;
  std::map<std::string, int> seen;  // key -> line of first occurrence

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      syntax_fail(line_no, "expected key = value");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) syntax_fail(line_no, "empty key");
    if (value.empty()) syntax_fail(line_no, "empty value for '" + key + "'");
    if (auto it = seen.find(key); it != seen.end()) {
      syntax_fail(line_no, "duplicate key '" + key + "' (first on line " +
                               std::to_string(it->second) + ")");
    }
    seen[key] = line_no;

    if (key == "name") {
      def.name = std::string(value);
    } else if (key == "class") {
      saw_class = true;
      if (value == "finite") {
        def.tag = ClassTag::FiniteBranches;
      } else if (value == "countable") {
        def.tag = ClassTag::CountableAccumulatingAtZero;
      } else {
        syntax_fail(line_no, "class must be 'finite' or 'countable'");
      }
    } else if (key == "partition") {
      def.partition_rule = parse_at(value, line_no);
      if (expr_uses_x(def.partition_rule)) {
        syntax_fail(line_no, "partition rule may only use i");
      }
    } else if (key == "branch") {
      def.branch_rule = parse_at(value, line_no);
    } else if (key == "derivative") {
      def.derivative_rule = parse_at(value, line_no);
    } else if (key == "inverse") {
      def.inverse_rule = parse_at(value, line_no);
    } else if (key.rfind("branch.", 0) == 0 || key.rfind("derivative.", 0) == 0 ||
               key.rfind("inverse.", 0) == 0) {
      std::size_t dot = key.find('.');
      std::string head = key.substr(0, dot);
      long long idx = 0;
      try {
        idx = parse_int(key.substr(dot + 1));
      } catch (const Error&) {
        syntax_fail(line_no, "bad branch number in '" + key + "'");
      }
      if (idx < 1) syntax_fail(line_no, "branch numbers start at 1");
      ExplicitBranchDef& b = numbered[idx];
      if (head == "branch") {
        // left, right, expr
        std::size_t c1 = value.find(',');
        std::size_t c2 = c1 == std::string_view::npos ? std::string_view::npos
                                                      : value.find(',', c1 + 1);
        if (c1 == std::string_view::npos || c2 == std::string_view::npos) {
          syntax_fail(line_no, "explicit branch needs 'left, right, expr'");
        }
        b.left = constant_value(parse_at(trim(value.substr(0, c1)), line_no), line_no,
                                "branch left endpoint");
        b.right = constant_value(parse_at(trim(value.substr(c1 + 1, c2 - c1 - 1)), line_no),
                                 line_no, "branch right endpoint");
        b.forward = parse_at(trim(value.substr(c2 + 1)), line_no);
      } else if (head == "derivative") {
        b.derivative = parse_at(value, line_no);
      } else {
        b.inverse = parse_at(value, line_no);
      }
    } else {
      syntax_fail(line_no, "unknown key '" + key + "'");
    }
  }

  if (!saw_class) {
    fail(ErrorCode::SyntaxError, "missing 'class' entry");
  }

  if (def.tag == ClassTag::CountableAccumulatingAtZero) {
    if (!def.partition_rule || !def.branch_rule) {
      fail(ErrorCode::SyntaxError,
           "a countable map needs 'partition' and 'branch' rules");
    }
    if (!numbered.empty()) {
      fail(ErrorCode::SyntaxError,
           "a countable map cannot also list explicit branches");
    }
  } else {
    if (numbered.empty()) {
      fail(ErrorCode::SyntaxError, "a finite map needs explicit branch entries");
    }
    if (def.partition_rule || def.branch_rule) {
      fail(ErrorCode::SyntaxError,
           "a finite map cannot also give partition/branch rules");
    }
    long long expect = 1;
    for (const auto& [idx, b] : numbered) {
      if (idx != expect) {
        fail(ErrorCode::SyntaxError,
             "explicit branches must be numbered 1.." +
                 std::to_string(numbered.size()) + " without gaps");
      }
      if (!b.forward) {
        fail(ErrorCode::SyntaxError,
             "branch." + std::to_string(idx) + " entry is missing");
      }
      ++expect;
      def.explicit_branches.push_back(b);
    }
  }
  return def;
}

MapDefinition load_map_definition(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_map_definition(buf.str());
}

namespace {

// Numeric derivative of an expression-backed branch, used when no derivative
// rule is given.  Central difference clamped into the branch interval, with
// the right endpoint backed off an ulp-scale margin because closed forms
// often leave their domain exactly there.
std::function<double(double)> numeric_derivative(ExprPtr rule, long long i,
                                                 double left, double right) {
  return [rule, i, left, right](double x) {
    double width = right - left;
    double h = std::max(1e-7 * width, 1e-12);
    double lo = std::max(x - h, left);
    double hi = std::min(x + h, right - width * 1e-12);
    if (!(hi > lo)) {
      lo = left;
      hi = left + h;
    }
    return (eval_expr(rule, hi, i) - eval_expr(rule, lo, i)) / (hi - lo);
  };
}

double branch_image_sup(const std::function<double(double)>& forward,
                        double left, double right) {
  double width = right - left;
  for (double back : {0.0, 1e-15, 1e-12, 1e-9}) {
    try {
      double y = forward(right - back * width);
      if (std::isfinite(y)) return std::min(std::max(y, 0.0), 1.0);
    } catch (const Error&) {
      // fall through to a slightly retreated sample
    }
  }
  fail(ErrorCode::ExprDomain,
       "branch formula fails everywhere near its right endpoint " +
           format_double(right));
}

Branch build_rule_branch(const MapDefinition& def, long long i, double a_i,
                         double a_im1) {
  Branch b;
  b.left = a_i;
  b.right = a_im1;
  b.family_index = i;
  ExprPtr rule = def.branch_rule;
  b.forward = [rule, i](double x) { return eval_expr(rule, x, i); };
  if (def.derivative_rule) {
    ExprPtr drule = def.derivative_rule;
    b.derivative = [drule, i](double x) { return eval_expr(drule, x, i); };
  } else {
    b.derivative = numeric_derivative(rule, i, a_i, a_im1);
  }
  if (def.inverse_rule) {
    ExprPtr irule = def.inverse_rule;
    b.inverse = [irule, i](double y) { return eval_expr(irule, y, i); };
  }
  b.image_sup = branch_image_sup(b.forward, b.left, b.right);
  return b;
}

double partition_at(const MapDefinition& def, long long i) {
  double a = eval_expr(def.partition_rule, 0.0, i);
  if (!(a > 0.0 && a < 1.0)) {
    fail(ErrorCode::InvalidArgument,
         "partition rule gave a_" + std::to_string(i) + " = " + format_double(a) +
             " outside (0,1)");
  }
  return a;
}

MapSpec compile_countable(const MapDefinition& def, long long n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "n_branches must be >= 1");
  std::vector<double> a(static_cast<std::size_t>(n) + 1);
  a[0] = 1.0;
  for (long long i = 1; i <= n; ++i) {
    a[static_cast<std::size_t>(i)] = partition_at(def, i);
    if (!(a[static_cast<std::size_t>(i)] < a[static_cast<std::size_t>(i - 1)])) {
      fail(ErrorCode::InvalidArgument,
           "partition rule must be strictly decreasing; a_" + std::to_string(i) +
               " = " + format_double(a[static_cast<std::size_t>(i)]) +
               " does not drop below a_" + std::to_string(i - 1));
    }
  }
  std::vector<Branch> branches;
  branches.reserve(static_cast<std::size_t>(n));
  for (long long i = n; i >= 1; --i) {
    branches.push_back(build_rule_branch(def, i, a[static_cast<std::size_t>(i)],
                                         a[static_cast<std::size_t>(i - 1)]));
  }

  FamilyRule family;
  MapDefinition rules = def;  // closures keep their own copy of the rules
  family.partition_point = [rules](long long m) { return partition_at(rules, m); };
  if (def.derivative_rule) {
    ExprPtr drule = def.derivative_rule;
    MapDefinition prules = def;
    family.slope_at_left = [drule, prules](long long m) {
      return eval_expr(drule, partition_at(prules, m), m);
    };
  } else {
    ExprPtr rule = def.branch_rule;
    MapDefinition prules = def;
    family.slope_at_left = [rule, prules](long long m) {
      double a_m = partition_at(prules, m);
      double a_m1 = m == 1 ? 1.0 : partition_at(prules, m - 1);
      return numeric_derivative(rule, m, a_m, a_m1)(a_m);
    };
  }
  return MapSpec(std::move(branches), ClassTag::CountableAccumulatingAtZero,
                 std::move(family), def.name);
}

MapSpec compile_finite(const MapDefinition& def) {
  std::vector<Branch> branches;
  branches.reserve(def.explicit_branches.size());
  for (std::size_t j = 0; j < def.explicit_branches.size(); ++j) {
    const ExplicitBranchDef& src = def.explicit_branches[j];
    long long i = static_cast<long long>(j + 1);
    Branch b;
    b.left = src.left;
    b.right = src.right;
    ExprPtr rule = src.forward;
    b.forward = [rule, i](double x) { return eval_expr(rule, x, i); };
    if (src.derivative) {
      ExprPtr drule = src.derivative;
      b.derivative = [drule, i](double x) { return eval_expr(drule, x, i); };
    } else {
      b.derivative = numeric_derivative(rule, i, b.left, b.right);
    }
    if (src.inverse) {
      ExprPtr irule = src.inverse;
      b.inverse = [irule, i](double y) { return eval_expr(irule, y, i); };
    }
    b.image_sup = branch_image_sup(b.forward, b.left, b.right);
    branches.push_back(std::move(b));
  }
  return MapSpec(std::move(branches), ClassTag::FiniteBranches, std::nullopt,
                 def.name);
}

}  // namespace

MapSpec compile_map(const MapDefinition& def, long long n_branches) {
  if (def.tag == ClassTag::CountableAccumulatingAtZero) {
    return compile_countable(def, n_branches);
  }
  return compile_finite(def);
}

MapSpec compile_map_floor(const MapDefinition& def, double min_branch_width) {
  if (def.tag != ClassTag::CountableAccumulatingAtZero) {
    fail(ErrorCode::InvalidArgument,
         "width-floor compilation applies to countable maps only");
  }
  if (!(min_branch_width > 0.0)) {
    fail(ErrorCode::InvalidArgument, "min_branch_width must be positive");
  }
  constexpr long long kMaxBranches = 10000000;
  double prev = 1.0;
  long long n = 0;
  for (long long i = 1; i <= kMaxBranches; ++i) {
    double a_i = partition_at(def, i);
    if (!(a_i < prev)) {
      fail(ErrorCode::InvalidArgument,
           "partition rule must be strictly decreasing at i = " + std::to_string(i));
    }
    if (prev - a_i < min_branch_width) break;
    n = i;
    prev = a_i;
  }
  if (n == 0) {
    fail(ErrorCode::BelowResolutionFloor,
         "no branch is as wide as the floor " + format_double(min_branch_width));
  }
  if (n == kMaxBranches) {
    fail(ErrorCode::InvalidArgument,
         "width floor materializes more than " + std::to_string(kMaxBranches) +
             " branches");
  }
  return compile_countable(def, n);
}

}  // namespace ulampc
