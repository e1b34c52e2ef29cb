#pragma once

// Expression trees for the nonlinearity f(x, y) and for the smooth factors
// of the coefficient functions. Trees are immutable and share subtrees.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <unordered_map>

#include "oham/error.hpp"

namespace oham {

enum class ExprOp { constant, var_x, var_y, neg, add, sub, mul, div, exp, log, pow };

class Expr {
 public:
  struct Node {
    ExprOp op = ExprOp::constant;
    double value = 0.0;  // constant value, or the exponent of a pow node
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
    bool has_x = false;
    bool has_y = false;
  };
  using NodePtr = std::shared_ptr<const Node>;

  Expr() : Expr(constant(0.0)) {}

  static Expr constant(double v) { return Expr(make(ExprOp::constant, v, nullptr, nullptr)); }
  static Expr x() { return Expr(make(ExprOp::var_x, 0.0, nullptr, nullptr)); }
  static Expr y() { return Expr(make(ExprOp::var_y, 0.0, nullptr, nullptr)); }

  const Node& node() const { return *root_; }
  const NodePtr& ptr() const { return root_; }
  ExprOp op() const { return root_->op; }
  bool is_constant() const { return root_->op == ExprOp::constant; }
  bool is_constant(double v) const { return is_constant() && root_->value == v; }
  double constant_value() const { return root_->value; }
  bool depends_on_x() const { return root_->has_x; }
  bool depends_on_y() const { return root_->has_y; }
  Expr lhs() const { return Expr(root_->lhs); }
  Expr rhs() const { return Expr(root_->rhs); }

  friend Expr operator-(const Expr& a) {
    if (a.is_constant()) return constant(-a.constant_value());
    if (a.op() == ExprOp::neg) return a.lhs();
    return Expr(make(ExprOp::neg, 0.0, a.root_, nullptr));
  }
  friend Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return constant(a.constant_value() + b.constant_value());
    if (a.is_constant(0.0)) return b;
    if (b.is_constant(0.0)) return a;
    return Expr(make(ExprOp::add, 0.0, a.root_, b.root_));
  }
  friend Expr operator-(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return constant(a.constant_value() - b.constant_value());
    if (b.is_constant(0.0)) return a;
    if (a.is_constant(0.0)) return -b;
    return Expr(make(ExprOp::sub, 0.0, a.root_, b.root_));
  }
  friend Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return constant(a.constant_value() * b.constant_value());
    if (a.is_constant(0.0) || b.is_constant(0.0)) return constant(0.0);
    if (a.is_constant(1.0)) return b;
    if (b.is_constant(1.0)) return a;
    if (a.is_constant(-1.0)) return -b;
    if (b.is_constant(-1.0)) return -a;
    return Expr(make(ExprOp::mul, 0.0, a.root_, b.root_));
  }
  friend Expr operator/(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant() && b.constant_value() != 0.0)
      return constant(a.constant_value() / b.constant_value());
    if (a.is_constant(0.0) && !b.is_constant(0.0)) return constant(0.0);
    if (b.is_constant(1.0)) return a;
    return Expr(make(ExprOp::div, 0.0, a.root_, b.root_));
  }
  friend Expr exp(const Expr& a) {
    if (a.is_constant()) return constant(std::exp(a.constant_value()));
    return Expr(make(ExprOp::exp, 0.0, a.root_, nullptr));
  }
  friend Expr log(const Expr& a) {
    if (a.is_constant() && a.constant_value() > 0.0) return constant(std::log(a.constant_value()));
    return Expr(make(ExprOp::log, 0.0, a.root_, nullptr));
  }
  friend Expr pow(const Expr& a, double p) {
    if (p == 0.0) return constant(1.0);
    if (p == 1.0) return a;
    if (a.is_constant()) {
      const double b = a.constant_value();
      if (b > 0.0 || (b == 0.0 && p > 0.0) || (b < 0.0 && p == std::round(p)))
        return constant(std::pow(b, p));
    }
    return Expr(make(ExprOp::pow, p, a.root_, nullptr));
  }

  /// Scalar evaluation. Throws Errc::domain_error for log/pow/div outside
  /// their real domain.
  double eval(double x, double y) const { return eval_node(*root_, x, y); }
  static double eval(const Node& n, double x, double y) { return eval_node(n, x, y); }

  /// Evaluation that visits each shared subtree once; worthwhile for the
  /// large DAGs produced by repeated differentiation.
  double eval_shared(double x, double y) const {
    std::unordered_map<const Node*, double> memo;
    return eval_memo(*root_, x, y, memo);
  }

  std::string to_string() const {
    std::string out;
    print(*root_, out);
    return out;
  }

  friend bool operator==(const Expr& a, const Expr& b) { return same(a.root_.get(), b.root_.get()); }

  explicit Expr(NodePtr root) : root_(std::move(root)) {}

 private:
  static NodePtr make(ExprOp op, double value, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->value = value;
    n->has_x = op == ExprOp::var_x || (lhs && lhs->has_x) || (rhs && rhs->has_x);
    n->has_y = op == ExprOp::var_y || (lhs && lhs->has_y) || (rhs && rhs->has_y);
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  static double checked_pow(double b, double p) {
    if (b < 0.0 && p != std::round(p))
      throw Error(Errc::domain_error, "non-integer power of negative base " + std::to_string(b));
    if (b == 0.0 && p < 0.0) throw Error(Errc::domain_error, "negative power of zero");
    return std::pow(b, p);
  }

  static double apply(ExprOp op, double p, double a, double b) {
    switch (op) {
      case ExprOp::neg: return -a;
      case ExprOp::add: return a + b;
      case ExprOp::sub: return a - b;
      case ExprOp::mul: return a * b;
      case ExprOp::div:
        if (b == 0.0) throw Error(Errc::domain_error, "division by zero");
        return a / b;
      case ExprOp::exp: return std::exp(a);
      case ExprOp::log:
        if (!(a > 0.0)) throw Error(Errc::domain_error, "log of non-positive value " + std::to_string(a));
        return std::log(a);
      case ExprOp::pow: return checked_pow(a, p);
      default: return 0.0;
    }
  }

  static double eval_node(const Node& n, double x, double y) {
    switch (n.op) {
      case ExprOp::constant: return n.value;
      case ExprOp::var_x: return x;
      case ExprOp::var_y: return y;
      default: break;
    }
    const double a = eval_node(*n.lhs, x, y);
    const double b = n.rhs ? eval_node(*n.rhs, x, y) : 0.0;
    return apply(n.op, n.value, a, b);
  }

  static double eval_memo(const Node& n, double x, double y,
                          std::unordered_map<const Node*, double>& memo) {
    switch (n.op) {
      case ExprOp::constant: return n.value;
      case ExprOp::var_x: return x;
      case ExprOp::var_y: return y;
      default: break;
    }
    if (auto it = memo.find(&n); it != memo.end()) return it->second;
    const double a = eval_memo(*n.lhs, x, y, memo);
    const double b = n.rhs ? eval_memo(*n.rhs, x, y, memo) : 0.0;
    const double v = apply(n.op, n.value, a, b);
    memo.emplace(&n, v);
    return v;
  }

  static void print_number(double v, std::string& out) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    if (v < 0.0) {
      out += '(';
      out += buf;
      out += ')';
    } else {
      out += buf;
    }
  }

  static void print(const Node& n, std::string& out) {
    switch (n.op) {
      case ExprOp::constant: print_number(n.value, out); return;
      case ExprOp::var_x: out += 'x'; return;
      case ExprOp::var_y: out += 'y'; return;
      case ExprOp::neg:
        out += "(-";
        print(*n.lhs, out);
        out += ')';
        return;
      case ExprOp::exp:
      case ExprOp::log:
        out += n.op == ExprOp::exp ? "exp(" : "log(";
        print(*n.lhs, out);
        out += ')';
        return;
      case ExprOp::pow:
        out += '(';
        print(*n.lhs, out);
        out += " ^ ";
        print_number(n.value, out);
        out += ')';
        return;
      default: break;
    }
    const char* sym = n.op == ExprOp::add ? " + " : n.op == ExprOp::sub ? " - " : n.op == ExprOp::mul ? " * " : " / ";
    out += '(';
    print(*n.lhs, out);
    out += sym;
    print(*n.rhs, out);
    out += ')';
  }

  static bool same(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->op != b->op || a->value != b->value) return false;
    return same(a->lhs.get(), b->lhs.get()) && same(a->rhs.get(), b->rhs.get());
  }

  NodePtr root_;
};

/// d/dy of an expression, built symbolically with constant folding.
inline Expr derivative_y(const Expr& e) {
  if (!e.depends_on_y()) return Expr::constant(0.0);
  switch (e.op()) {
    case ExprOp::var_y: return Expr::constant(1.0);
    case ExprOp::neg: return -derivative_y(e.lhs());
    case ExprOp::add: return derivative_y(e.lhs()) + derivative_y(e.rhs());
    case ExprOp::sub: return derivative_y(e.lhs()) - derivative_y(e.rhs());
    case ExprOp::mul: {
      const Expr u = e.lhs(), v = e.rhs();
      return derivative_y(u) * v + u * derivative_y(v);
    }
    case ExprOp::div: {
      const Expr u = e.lhs(), v = e.rhs();
      if (!v.depends_on_y()) return derivative_y(u) / v;
      return (derivative_y(u) * v - u * derivative_y(v)) / pow(v, 2.0);
    }
    case ExprOp::exp: return e * derivative_y(e.lhs());
    case ExprOp::log: return derivative_y(e.lhs()) / e.lhs();
    case ExprOp::pow: {
      const double p = e.node().value;
      return Expr::constant(p) * pow(e.lhs(), p - 1.0) * derivative_y(e.lhs());
    }
    default: return Expr::constant(0.0);
  }
}

using ParameterMap = std::map<std::string, double>;

namespace detail {

// Recursive-descent parser for
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := ('-' | '+') unary | power
//   power := primary ('^' unary)?
//   primary := number | 'x' | 'y' | name | func '(' expr ')' | '(' expr ')'
// with func in {exp, log, sqrt}. Exponents must be constant.
class ExprParser {
 public:
  ExprParser(std::string_view text, const ParameterMap& params, int line)
      : text_(text), params_(params), line_(line) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(line_, static_cast<int>(pos_) + 1, msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) lhs = lhs + term();
      else if (accept('-')) lhs = lhs - term();
      else return lhs;
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        Expr rhs = unary();
        if (rhs.is_constant(0.0)) {
          pos_ = at;
          fail("division by constant zero");
        }
        lhs = lhs / rhs;
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) {
      const std::size_t at = pos_;
      Expr e = unary();
      if (!e.is_constant()) {
        pos_ = at;
        fail("exponent must be a constant");
      }
      return pow(base, e.constant_value());
    }
    return base;
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      if (name == "exp" || name == "log" || name == "sqrt") {
        if (!accept('(')) fail("expected '(' after " + name);
        Expr arg = expr();
        if (!accept(')')) fail("expected ')'");
        if (name == "exp") return exp(arg);
        if (name == "log") return log(arg);
        return pow(arg, 0.5);
      }
      if (name == "x") return Expr::x();
      if (name == "y") return Expr::y();
      if (name == "pi") return Expr::constant(std::numbers::pi);
      if (auto it = params_.find(name); it != params_.end()) return Expr::constant(it->second);
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::string rest(text_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    return Expr::constant(v);
  }

  std::string_view text_;
  const ParameterMap& params_;
  int line_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the surface syntax of a rule. Named parameters are substituted as
/// constants; `line` only tags error positions.
inline Expr parse_expr(std::string_view text, const ParameterMap& params = {}, int line = 1) {
  return detail::ExprParser(text, params, line).parse();
}

/// A nonlinearity f(x, y) together with its y-derivative, used for the
/// homotopy-derivative terms and the Lipschitz estimate.
class NonlinearityRule {
 public:
  NonlinearityRule() = default;
  explicit NonlinearityRule(Expr f) : f_(std::move(f)), f_y_(derivative_y(f_)) {}

  const Expr& expr() const { return f_; }
  const Expr& derivative() const { return f_y_; }
  double operator()(double x, double y) const { return f_.eval(x, y); }
  double dy(double x, double y) const { return f_y_.eval(x, y); }

  friend bool operator==(const NonlinearityRule& a, const NonlinearityRule& b) { return a.f_ == b.f_; }

 private:
  Expr f_;
  Expr f_y_ = Expr::constant(0.0);
};

}  // namespace oham
