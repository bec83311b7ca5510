#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

namespace ulampc {

// Arithmetic expressions over two variables: x (a point of [0,1]) and
// i (an integer branch index).  Supported operators: + - * / ^ (power,
// right-associative), unary minus, and single-argument calls from a fixed
// function table (sqrt, abs).  Expressions are immutable once built and
// shared freely via ExprPtr.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Number, VarX, VarI, Unary, Binary, Call };

  Kind kind = Kind::Number;
  double number = 0.0;   // Kind::Number
  char op = 0;           // Kind::Binary: one of + - * / ^ ; Kind::Unary: -
  std::string func;      // Kind::Call: function name
  ExprPtr lhs, rhs;      // operands; Unary and Call use lhs only
  std::size_t offset = 0;  // byte offset of this node in the source text
};

// Parses an expression.  Throws Error(SyntaxError) with the byte offset of
// the first offending token in the message.
ExprPtr parse_expr(std::string_view text);

// Prints with the minimal parenthesization that re-parses to a structurally
// identical tree: binary operators get single spaces around them except ^,
// which binds tightly and is printed without spaces.
std::string print_expr(const ExprPtr& expr);

// Evaluates at (x, i).  Domain violations (sqrt of a negative, division by
// zero, non-finite results) throw Error(ExprDomain) naming the offending
// subexpression; no NaN ever escapes silently.
double eval_expr(const ExprPtr& expr, double x, long long i);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

bool expr_uses_x(const ExprPtr& expr);
bool expr_uses_i(const ExprPtr& expr);

// True if `name` is in the call table accepted by the parser.
bool expr_function_known(std::string_view name);

}  // namespace ulampc
