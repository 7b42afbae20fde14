#pragma once

// Radial profile functions f(t), psi(t), G(t) written in a small expression
// language, with exact symbolic first and second derivatives.

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tonelab {

/// Raised when an expression is evaluated outside its domain: log or sqrt of
/// a negative number, division by zero, or a non-finite result.
class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& what, double t);
  double where() const noexcept { return t_; }

 private:
  double t_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position);
  /// Zero-based offset into the source text.
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

enum class NodeKind { constant, variable, neg, add, sub, mul, div, pow, call };

enum class Function { exp, log, sqrt, sin, cos, sinh, cosh, tanh, coth };

std::string_view function_name(Function fn);

/// Immutable expression tree in the single variable t. Copies share nodes.
class Expr {
 public:
  static Expr constant(double value);
  static Expr variable();
  static Expr neg(Expr operand);
  static Expr binary(NodeKind kind, Expr lhs, Expr rhs);
  static Expr call(Function fn, Expr argument);

  NodeKind kind() const;
  double value() const;       // constant nodes only
  Function function() const;  // call nodes only
  std::span<const Expr> children() const;

  bool is_constant() const { return kind() == NodeKind::constant; }
  bool is_constant(double c) const { return is_constant() && value() == c; }
  bool depends_on_t() const;
  std::size_t size() const;  // node count

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

bool structurally_equal(const Expr& a, const Expr& b);

// Builders with constant folding and identity elimination (0*x, 1*x, x+0,
// x-0, x/1, x^1, x^0, -(-x)). No other rewriting is attempted.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);
Expr call(Function fn, const Expr& argument);
Expr constant(double c);
Expr variable();

/// Parses the grammar
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := "-" factor | base ("^" factor)?
///   base   := number | "t" | ident "(" expr ")" | "(" expr ")"
Expr parse_expr(std::string_view src);

/// Prints with the minimal parentheses needed to reparse the same tree.
std::string to_string(const Expr& e);

Expr differentiate(const Expr& e);

/// Plain IEEE-754 evaluation. Throws DomainError instead of returning NaN or
/// an infinity.
double eval(const Expr& e, double t);

/// A real number stored as sign * exp(log_abs); sign is 0 for exact zero.
struct SignedLog {
  int sign = 0;
  double log_abs = 0.0;

  static SignedLog from(double x);
  double value() const;
};

/// Evaluation in the signed log domain. exp() arguments never leave log
/// space, so profiles like t*exp(t^2) stay representable at t = 50.
SignedLog eval_log(const Expr& e, double t);

/// ratio num(t)/den(t) computed through eval_log.
double eval_ratio(const Expr& num, const Expr& den, double t);

enum class ProfileDomain { closed_at_zero, open_at_zero };

/// A named expression together with its first and second derivatives.
class Profile {
 public:
  /// Parses src (or resolves a builtin name, see resolve_profile) and
  /// differentiates symbolically.
  static Profile parse(std::string_view src);
  static Profile from_expr(std::string label, Expr e);
  static Profile with_derivatives(std::string label, Expr e, Expr d1, Expr d2);

  const std::string& source() const { return source_; }
  const Expr& expr() const { return expr_; }
  const Expr& d1_expr() const { return d1_; }
  const Expr& d2_expr() const { return d2_; }
  ProfileDomain domain() const { return domain_; }

  double value(double t) const { return eval(expr_, t); }
  double d1(double t) const { return eval(d1_, t); }
  double d2(double t) const { return eval(d2_, t); }
  SignedLog log_value(double t) const { return eval_log(expr_, t); }

  /// f'(t)/f(t) and f''(t)/f(t), overflow-safe.
  double log_derivative(double t) const;
  double second_ratio(double t) const;

  bool is_constant() const { return !expr_.depends_on_t(); }

 private:
  Profile(std::string source, Expr e, Expr d1, Expr d2);

  std::string source_;
  Expr expr_;
  Expr d1_;
  Expr d2_;
  ProfileDomain domain_;
};

namespace presets {

Profile euclidean();                  // f = t
Profile hyperbolic(double kappa);     // f = sinh(sqrt(-kappa) t)/sqrt(-kappa)
Profile baider_base();                // f = t exp(t^2)
Profile baider_fiber();               // psi = exp(t - t^2)
Profile constant(double c);

}  // namespace presets

/// Builtin names: "euclidean", "hyperbolic" (kappa = -1), "hyperbolic:<kappa>",
/// "baider_base", "baider_fiber". Anything else is parsed as an expression.
Profile resolve_profile(std::string_view name_or_expr);

}  // namespace tonelab
