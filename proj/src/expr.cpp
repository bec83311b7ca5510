#include "ulampc/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

#include "ulampc/error.hpp"

namespace ulampc {

namespace {

// -------------------------------------------------------------------------
// Function table.  Single-argument real functions; extending the DSL means
// adding a row here and nothing else.
struct FuncEntry {
  const char* name;
  double (*fn)(double);
  bool (*in_domain)(double);
};

bool any_real(double) { return true; }
bool non_negative(double v) { return v >= 0.0; }

constexpr FuncEntry kFuncTable[] = {
    {"sqrt", [](double v) { return std::sqrt(v); }, non_negative},
    {"abs", [](double v) { return std::fabs(v); }, any_real},
};

const FuncEntry* find_func(std::string_view name) {
  for (const auto& entry : kFuncTable) {
    if (name == entry.name) return &entry;
  }
  return nullptr;
}

// -------------------------------------------------------------------------
// Lexer
struct Token {
  enum class Kind { Number, Ident, Op, LParen, RParen, End };
  Kind kind = Kind::End;
  double number = 0.0;
  std::string_view text;
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    current_ = Token{};
    current_.offset = pos_;
    if (pos_ >= text_.size()) {
      current_.kind = Token::Kind::End;
      return;
    }
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      const char* begin = text_.data() + pos_;
      const char* end = text_.data() + text_.size();
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(begin, end, value);
      if (ec != std::errc{}) {
        fail(ErrorCode::SyntaxError,
             "invalid numeric literal at offset " + std::to_string(pos_));
      }
      current_.kind = Token::Kind::Number;
      current_.number = value;
      current_.text = text_.substr(pos_, static_cast<std::size_t>(ptr - begin));
      pos_ += static_cast<std::size_t>(ptr - begin);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      current_.kind = Token::Kind::Ident;
      current_.text = text_.substr(start, pos_ - start);
      return;
    }
    switch (c) {
      case '+': case '-': case '*': case '/': case '^':
        current_.kind = Token::Kind::Op;
        current_.text = text_.substr(pos_, 1);
        ++pos_;
        return;
      case '(':
        current_.kind = Token::Kind::LParen;
        ++pos_;
        return;
      case ')':
        current_.kind = Token::Kind::RParen;
        ++pos_;
        return;
      default:
        fail(ErrorCode::SyntaxError,
             std::string("unexpected character '") + c + "' at offset " + std::to_string(pos_));
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_;
};

// -------------------------------------------------------------------------
// Parser: precedence climbing.
//
// Binding powers: + - (10,11), * / (20,21), unary - (30), ^ (41,40).
// A right binding power below the left one makes ^ right-associative, and
// placing unary minus between * and ^ gives the usual reading of -x^2 as
// -(x^2) while 2^-3 still parses.
struct OpInfo {
  int lbp;
  int rbp;
};

bool binary_op_info(char op, OpInfo& info) {
  switch (op) {
    case '+': case '-': info = {10, 11}; return true;
    case '*': case '/': info = {20, 21}; return true;
    case '^': info = {41, 40}; return true;
    default: return false;
  }
}

constexpr int kUnaryBp = 30;

ExprPtr make_number(double value, std::size_t offset) {
  auto node = std::make_shared<Expr>();
  node->kind = Expr::Kind::Number;
  node->number = value;
  node->offset = offset;
  return node;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) {}

  ExprPtr parse() {
    ExprPtr e = parse_bp(0);
    const Token& t = lexer_.peek();
    if (t.kind != Token::Kind::End) {
      fail(ErrorCode::SyntaxError,
           "unexpected trailing input at offset " + std::to_string(t.offset));
    }
    return e;
  }

 private:
  ExprPtr parse_bp(int min_bp) {
    ExprPtr lhs = parse_prefix();
    for (;;) {
      const Token& t = lexer_.peek();
      if (t.kind != Token::Kind::Op) break;
      OpInfo info{};
      binary_op_info(t.text[0], info);
      if (info.lbp < min_bp) break;
      Token op = lexer_.take();
      ExprPtr rhs = parse_bp(info.rbp);
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::Binary;
      node->op = op.text[0];
      node->lhs = std::move(lhs);
      node->rhs = std::move(rhs);
      node->offset = op.offset;
      lhs = std::move(node);
    }
    return lhs;
  }

  ExprPtr parse_prefix() {
    Token t = lexer_.take();
    switch (t.kind) {
      case Token::Kind::Number:
        return make_number(t.number, t.offset);
      case Token::Kind::Ident: {
        if (t.text == "x") {
          auto node = std::make_shared<Expr>();
          node->kind = Expr::Kind::VarX;
          node->offset = t.offset;
          return node;
        }
        if (t.text == "i") {
          auto node = std::make_shared<Expr>();
          node->kind = Expr::Kind::VarI;
          node->offset = t.offset;
          return node;
        }
        if (find_func(t.text) != nullptr) {
          if (lexer_.peek().kind != Token::Kind::LParen) {
            fail(ErrorCode::SyntaxError,
                 "expected '(' after function '" + std::string(t.text) +
                     "' at offset " + std::to_string(lexer_.peek().offset));
          }
          lexer_.take();
          ExprPtr arg = parse_bp(0);
          if (lexer_.peek().kind != Token::Kind::RParen) {
            fail(ErrorCode::SyntaxError,
                 "expected ')' at offset " + std::to_string(lexer_.peek().offset));
          }
          lexer_.take();
          auto node = std::make_shared<Expr>();
          node->kind = Expr::Kind::Call;
          node->func = std::string(t.text);
          node->lhs = std::move(arg);
          node->offset = t.offset;
          return node;
        }
        fail(ErrorCode::SyntaxError,
             "unknown identifier '" + std::string(t.text) + "' at offset " +
                 std::to_string(t.offset));
      }
      case Token::Kind::Op: {
        if (t.text[0] == '-') {
          ExprPtr operand = parse_bp(kUnaryBp);
          auto node = std::make_shared<Expr>();
          node->kind = Expr::Kind::Unary;
          node->op = '-';
          node->lhs = std::move(operand);
          node->offset = t.offset;
          return node;
        }
        fail(ErrorCode::SyntaxError,
             "unexpected operator '" + std::string(t.text) + "' at offset " +
                 std::to_string(t.offset));
      }
      case Token::Kind::LParen: {
        ExprPtr inner = parse_bp(0);
        if (lexer_.peek().kind != Token::Kind::RParen) {
          fail(ErrorCode::SyntaxError,
               "expected ')' at offset " + std::to_string(lexer_.peek().offset));
        }
        lexer_.take();
        return inner;
      }
      case Token::Kind::RParen:
        fail(ErrorCode::SyntaxError,
             "unexpected ')' at offset " + std::to_string(t.offset));
      case Token::Kind::End:
        fail(ErrorCode::SyntaxError,
             "unexpected end of input at offset " + std::to_string(t.offset));
    }
    fail(ErrorCode::SyntaxError, "unreachable");
  }

  Lexer lexer_;
};

// -------------------------------------------------------------------------
// Printer.  Each node carries a binding power; a child is parenthesized
// exactly when its power is below what its position requires, so the output
// re-parses to the same tree with no redundant parentheses.
int node_power(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Number:
    case Expr::Kind::VarX:
    case Expr::Kind::VarI:
    case Expr::Kind::Call:
      return 100;
    case Expr::Kind::Unary:
      return kUnaryBp;
    case Expr::Kind::Binary:
      switch (e.op) {
        case '+': case '-': return 10;
        case '*': case '/': return 20;
        case '^': return 40;
      }
  }
  return 100;
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

void print_node(const Expr& e, int min_power, std::string& out) {
  int power = node_power(e);
  bool parens = power < min_power;
  if (parens) out += '(';
  switch (e.kind) {
    case Expr::Kind::Number:
      out += format_number(e.number);
      break;
    case Expr::Kind::VarX:
      out += 'x';
      break;
    case Expr::Kind::VarI:
      out += 'i';
      break;
    case Expr::Kind::Unary:
      out += '-';
      print_node(*e.lhs, kUnaryBp, out);
      break;
    case Expr::Kind::Call:
      out += e.func;
      out += '(';
      print_node(*e.lhs, 0, out);
      out += ')';
      break;
    case Expr::Kind::Binary: {
      // Left-associative operators require strictly higher power on the
      // right; ^ is the mirror image.
      int left_req = (e.op == '^') ? power + 1 : power;
      int right_req = (e.op == '^') ? power : power + 1;
      print_node(*e.lhs, left_req, out);
      if (e.op == '^') {
        out += '^';
      } else {
        out += ' ';
        out += e.op;
        out += ' ';
      }
      print_node(*e.rhs, right_req, out);
      break;
    }
  }
  if (parens) out += ')';
}

[[noreturn]] void domain_fail(const Expr& node, const char* what) {
  ExprPtr copy = std::make_shared<Expr>(node);
  fail(ErrorCode::ExprDomain,
       std::string(what) + " in '" + print_expr(copy) + "'");
}

double eval_node(const Expr& e, double x, long long i) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return e.number;
    case Expr::Kind::VarX:
      return x;
    case Expr::Kind::VarI:
      return static_cast<double>(i);
    case Expr::Kind::Unary:
      return -eval_node(*e.lhs, x, i);
    case Expr::Kind::Call: {
      double arg = eval_node(*e.lhs, x, i);
      const FuncEntry* entry = find_func(e.func);
      if (entry == nullptr) domain_fail(e, "unknown function");
      if (!entry->in_domain(arg)) domain_fail(e, "argument outside domain");
      return entry->fn(arg);
    }
    case Expr::Kind::Binary: {
      double a = eval_node(*e.lhs, x, i);
      double b = eval_node(*e.rhs, x, i);
      double v = 0.0;
      switch (e.op) {
        case '+': v = a + b; break;
        case '-': v = a - b; break;
        case '*': v = a * b; break;
        case '/':
          if (b == 0.0) domain_fail(e, "division by zero");
          v = a / b;
          break;
        case '^':
          v = std::pow(a, b);
          if (!std::isfinite(v)) domain_fail(e, "power outside domain");
          break;
      }
      if (!std::isfinite(v)) domain_fail(e, "non-finite value");
      return v;
    }
  }
  return 0.0;
}

}  // namespace

ExprPtr parse_expr(std::string_view text) {
  Parser parser(text);
  return parser.parse();
}

std::string print_expr(const ExprPtr& expr) {
  if (!expr) fail(ErrorCode::InvalidArgument, "print_expr: null expression");
  std::string out;
  print_node(*expr, 0, out);
  return out;
}

double eval_expr(const ExprPtr& expr, double x, long long i) {
  if (!expr) fail(ErrorCode::InvalidArgument, "eval_expr: null expression");
  return eval_node(*expr, x, i);
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Number:
      return a->number == b->number;
    case Expr::Kind::VarX:
    case Expr::Kind::VarI:
      return true;
    case Expr::Kind::Unary:
      return a->op == b->op && expr_equal(a->lhs, b->lhs);
    case Expr::Kind::Call:
      return a->func == b->func && expr_equal(a->lhs, b->lhs);
    case Expr::Kind::Binary:
      return a->op == b->op && expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
  }
  return false;
}

bool expr_uses_x(const ExprPtr& expr) {
  if (!expr) return false;
  if (expr->kind == Expr::Kind::VarX) return true;
  return expr_uses_x(expr->lhs) || expr_uses_x(expr->rhs);
}

bool expr_uses_i(const ExprPtr& expr) {
  if (!expr) return false;
  if (expr->kind == Expr::Kind::VarI) return true;
  return expr_uses_i(expr->lhs) || expr_uses_i(expr->rhs);
}

bool expr_function_known(std::string_view name) {
  return find_func(name) != nullptr;
}

}  // namespace ulampc
