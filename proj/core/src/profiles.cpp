#include "tonelab/profiles.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "tonelab/numeric_format.hpp"

namespace tonelab {

DomainError::DomainError(const std::string& what, double t)
    : std::runtime_error(what + " at t=" + format_double(t)), t_(t) {}

ParseError::ParseError(const std::string& what, std::size_t position)
    : std::runtime_error(what + " at position " + std::to_string(position)),
      position_(position) {}

std::string_view function_name(Function fn) {
  switch (fn) {
    case Function::exp: return "exp";
    case Function::log: return "log";
    case Function::sqrt: return "sqrt";
    case Function::sin: return "sin";
    case Function::cos: return "cos";
    case Function::sinh: return "sinh";
    case Function::cosh: return "cosh";
    case Function::tanh: return "tanh";
    case Function::coth: return "coth";
  }
  return "?";
}

struct Expr::Node {
  NodeKind kind;
  double value = 0.0;
  Function fn = Function::exp;
  std::vector<Expr> children;
};

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable() {
  static const Expr t = [] {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::variable;
    return Expr(std::move(n));
  }();
  return t;
}

Expr Expr::neg(Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::neg;
  n->children.push_back(std::move(operand));
  return Expr(std::move(n));
}

Expr Expr::binary(NodeKind kind, Expr lhs, Expr rhs) {
  if (kind != NodeKind::add && kind != NodeKind::sub && kind != NodeKind::mul &&
      kind != NodeKind::div && kind != NodeKind::pow) {
    throw std::invalid_argument("Expr::binary: not a binary operator");
  }
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  return Expr(std::move(n));
}

Expr Expr::call(Function fn, Expr argument) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::call;
  n->fn = fn;
  n->children.push_back(std::move(argument));
  return Expr(std::move(n));
}

NodeKind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
Function Expr::function() const { return node_->fn; }
std::span<const Expr> Expr::children() const { return node_->children; }

bool Expr::depends_on_t() const {
  if (kind() == NodeKind::variable) return true;
  for (const auto& c : children())
    if (c.depends_on_t()) return true;
  return false;
}

std::size_t Expr::size() const {
  std::size_t n = 1;
  for (const auto& c : children()) n += c.size();
  return n;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind() != b.kind()) return false;
  if (a.kind() == NodeKind::constant) return a.value() == b.value();
  if (a.kind() == NodeKind::call && a.function() != b.function()) return false;
  auto ca = a.children();
  auto cb = b.children();
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (!structurally_equal(ca[i], cb[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Plain evaluation

namespace {

double checked(double x, double t, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string("non-finite result of ") + what, t);
  return x;
}

bool is_integer(double x) { return std::isfinite(x) && std::floor(x) == x; }

double apply_function(Function fn, double x, double t) {
  switch (fn) {
    case Function::exp: return checked(std::exp(x), t, "exp");
    case Function::log:
      if (x <= 0.0) throw DomainError("log of nonpositive argument", t);
      return std::log(x);
    case Function::sqrt:
      if (x < 0.0) throw DomainError("sqrt of negative argument", t);
      return std::sqrt(x);
    case Function::sin: return std::sin(x);
    case Function::cos: return std::cos(x);
    case Function::sinh: return checked(std::sinh(x), t, "sinh");
    case Function::cosh: return checked(std::cosh(x), t, "cosh");
    case Function::tanh: return std::tanh(x);
    case Function::coth:
      if (x == 0.0) throw DomainError("coth at zero", t);
      return 1.0 / std::tanh(x);
  }
  return 0.0;
}

double apply_pow(double base, double exponent, double t) {
  if (base < 0.0 && !is_integer(exponent))
    throw DomainError("negative base with non-integer exponent", t);
  if (base == 0.0 && exponent < 0.0) throw DomainError("zero to a negative power", t);
  return checked(std::pow(base, exponent), t, "pow");
}

}  // namespace

double eval(const Expr& e, double t) {
  switch (e.kind()) {
    case NodeKind::constant: return e.value();
    case NodeKind::variable: return t;
    case NodeKind::neg: return -eval(e.children()[0], t);
    case NodeKind::add:
      return checked(eval(e.children()[0], t) + eval(e.children()[1], t), t, "+");
    case NodeKind::sub:
      return checked(eval(e.children()[0], t) - eval(e.children()[1], t), t, "-");
    case NodeKind::mul:
      return checked(eval(e.children()[0], t) * eval(e.children()[1], t), t, "*");
    case NodeKind::div: {
      double den = eval(e.children()[1], t);
      if (den == 0.0) throw DomainError("division by zero", t);
      return checked(eval(e.children()[0], t) / den, t, "/");
    }
    case NodeKind::pow:
      return apply_pow(eval(e.children()[0], t), eval(e.children()[1], t), t);
    case NodeKind::call: return apply_function(e.function(), eval(e.children()[0], t), t);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Signed log-domain evaluation

SignedLog SignedLog::from(double x) {
  if (x == 0.0) return {0, -std::numeric_limits<double>::infinity()};
  return {x > 0 ? 1 : -1, std::log(std::fabs(x))};
}

double SignedLog::value() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_abs);
}

namespace {

SignedLog sl_add(SignedLog a, SignedLog b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  if (a.log_abs < b.log_abs) std::swap(a, b);
  double d = b.log_abs - a.log_abs;
  if (a.sign == b.sign) return {a.sign, a.log_abs + std::log1p(std::exp(d))};
  if (d == 0.0) return {0, -std::numeric_limits<double>::infinity()};
  return {a.sign, a.log_abs + std::log1p(-std::exp(d))};
}

SignedLog sl_check(SignedLog x, double t, const char* what) {
  if (x.sign != 0 && !std::isfinite(x.log_abs))
    throw DomainError(std::string("non-finite result of ") + what, t);
  return x;
}

constexpr double kLargeArg = 30.0;

}  // namespace

SignedLog eval_log(const Expr& e, double t) {
  switch (e.kind()) {
    case NodeKind::constant: return SignedLog::from(e.value());
    case NodeKind::variable: return SignedLog::from(t);
    case NodeKind::neg: {
      auto a = eval_log(e.children()[0], t);
      return {-a.sign, a.log_abs};
    }
    case NodeKind::add:
      return sl_add(eval_log(e.children()[0], t), eval_log(e.children()[1], t));
    case NodeKind::sub: {
      auto b = eval_log(e.children()[1], t);
      return sl_add(eval_log(e.children()[0], t), {-b.sign, b.log_abs});
    }
    case NodeKind::mul: {
      auto a = eval_log(e.children()[0], t);
      auto b = eval_log(e.children()[1], t);
      if (a.sign == 0 || b.sign == 0) return SignedLog::from(0.0);
      return sl_check({a.sign * b.sign, a.log_abs + b.log_abs}, t, "*");
    }
    case NodeKind::div: {
      auto a = eval_log(e.children()[0], t);
      auto b = eval_log(e.children()[1], t);
      if (b.sign == 0) throw DomainError("division by zero", t);
      if (a.sign == 0) return a;
      return sl_check({a.sign * b.sign, a.log_abs - b.log_abs}, t, "/");
    }
    case NodeKind::pow: {
      auto base = eval_log(e.children()[0], t);
      double p = eval(e.children()[1], t);
      if (base.sign == 0) {
        if (p > 0.0) return base;
        if (p == 0.0) return SignedLog::from(1.0);
        throw DomainError("zero to a negative power", t);
      }
      if (base.sign < 0) {
        if (!is_integer(p)) throw DomainError("negative base with non-integer exponent", t);
        int sign = std::fmod(std::fabs(p), 2.0) == 1.0 ? -1 : 1;
        return sl_check({sign, p * base.log_abs}, t, "pow");
      }
      if (p == 0.0) return SignedLog::from(1.0);
      return sl_check({1, p * base.log_abs}, t, "pow");
    }
    case NodeKind::call: {
      const Expr& arg = e.children()[0];
      switch (e.function()) {
        case Function::exp: return sl_check({1, eval_log(arg, t).value()}, t, "exp");
        case Function::log: {
          auto a = eval_log(arg, t);
          if (a.sign <= 0) throw DomainError("log of nonpositive argument", t);
          return SignedLog::from(a.log_abs);
        }
        case Function::sqrt: {
          auto a = eval_log(arg, t);
          if (a.sign < 0) throw DomainError("sqrt of negative argument", t);
          if (a.sign == 0) return a;
          return {1, 0.5 * a.log_abs};
        }
        case Function::sinh: {
          double x = eval_log(arg, t).value();
          if (std::fabs(x) > kLargeArg) return sl_check({x > 0 ? 1 : -1, std::fabs(x) - std::numbers::ln2}, t, "sinh");
          return SignedLog::from(std::sinh(x));
        }
        case Function::cosh: {
          double x = eval_log(arg, t).value();
          if (std::fabs(x) > kLargeArg) return sl_check({1, std::fabs(x) - std::numbers::ln2}, t, "cosh");
          return SignedLog::from(std::cosh(x));
        }
        default: {
          double x = eval_log(arg, t).value();
          if (!std::isfinite(x)) throw DomainError("non-finite argument", t);
          return SignedLog::from(apply_function(e.function(), x, t));
        }
      }
    }
  }
  return {};
}

double eval_ratio(const Expr& num, const Expr& den, double t) {
  auto n = eval_log(num, t);
  auto d = eval_log(den, t);
  if (d.sign == 0) throw DomainError("division by zero", t);
  if (n.sign == 0) return 0.0;
  double r = n.sign * d.sign * std::exp(n.log_abs - d.log_abs);
  if (!std::isfinite(r)) throw DomainError("non-finite ratio", t);
  return r;
}

// ---------------------------------------------------------------------------
// Simplifying builders

Expr constant(double c) { return Expr::constant(c); }
Expr variable() { return Expr::variable(); }

namespace {

bool foldable(double x) { return std::isfinite(x); }

}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && foldable(a.value() + b.value()))
    return constant(a.value() + b.value());
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return Expr::binary(NodeKind::add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && foldable(a.value() - b.value()))
    return constant(a.value() - b.value());
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  return Expr::binary(NodeKind::sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && foldable(a.value() * b.value()))
    return constant(a.value() * b.value());
  if (a.is_constant(0.0) || b.is_constant(0.0)) return constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  return Expr::binary(NodeKind::mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && b.value() != 0.0 && foldable(a.value() / b.value()))
    return constant(a.value() / b.value());
  if (a.is_constant(0.0) && !b.is_constant(0.0)) return constant(0.0);
  if (b.is_constant(1.0)) return a;
  return Expr::binary(NodeKind::div, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return constant(-a.value());
  if (a.kind() == NodeKind::neg) return a.children()[0];
  return Expr::neg(a);
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_constant(1.0)) return base;
  if (exponent.is_constant(0.0)) return constant(1.0);
  if (base.is_constant() && exponent.is_constant()) {
    try {
      return constant(apply_pow(base.value(), exponent.value(), 0.0));
    } catch (const DomainError&) {
    }
  }
  return Expr::binary(NodeKind::pow, base, exponent);
}

Expr call(Function fn, const Expr& argument) {
  if (argument.is_constant()) {
    try {
      return constant(apply_function(fn, argument.value(), 0.0));
    } catch (const DomainError&) {
    }
  }
  return Expr::call(fn, argument);
}

// ---------------------------------------------------------------------------
// Differentiation

Expr differentiate(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::constant: return constant(0.0);
    case NodeKind::variable: return constant(1.0);
    case NodeKind::neg: return -differentiate(e.children()[0]);
    case NodeKind::add: return differentiate(e.children()[0]) + differentiate(e.children()[1]);
    case NodeKind::sub: return differentiate(e.children()[0]) - differentiate(e.children()[1]);
    case NodeKind::mul: {
      const Expr& u = e.children()[0];
      const Expr& v = e.children()[1];
      return differentiate(u) * v + u * differentiate(v);
    }
    case NodeKind::div: {
      const Expr& u = e.children()[0];
      const Expr& v = e.children()[1];
      return (differentiate(u) * v - u * differentiate(v)) / pow(v, constant(2.0));
    }
    case NodeKind::pow: {
      const Expr& u = e.children()[0];
      const Expr& v = e.children()[1];
      if (!v.depends_on_t()) {
        return v * pow(u, v - constant(1.0)) * differentiate(u);
      }
      if (!u.depends_on_t()) {
        return e * call(Function::log, u) * differentiate(v);
      }
      return e * (differentiate(v) * call(Function::log, u) + v * differentiate(u) / u);
    }
    case NodeKind::call: {
      const Expr& u = e.children()[0];
      Expr du = differentiate(u);
      switch (e.function()) {
        case Function::exp: return e * du;
        case Function::log: return du / u;
        case Function::sqrt: return du / (constant(2.0) * e);
        case Function::sin: return call(Function::cos, u) * du;
        case Function::cos: return -(call(Function::sin, u) * du);
        case Function::sinh: return call(Function::cosh, u) * du;
        case Function::cosh: return call(Function::sinh, u) * du;
        case Function::tanh: return (constant(1.0) - pow(e, constant(2.0))) * du;
        case Function::coth: return (constant(1.0) - pow(e, constant(2.0))) * du;
      }
    }
  }
  return constant(0.0);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::add:
    case NodeKind::sub: return 1;
    case NodeKind::mul:
    case NodeKind::div: return 2;
    case NodeKind::neg: return 3;
    case NodeKind::pow: return 4;
    case NodeKind::constant: return e.value() < 0.0 || std::signbit(e.value()) ? 3 : 5;
    case NodeKind::variable:
    case NodeKind::call: return 5;
  }
  return 5;
}

void print(const Expr& e, std::ostringstream& out);

void print_child(const Expr& e, bool parens, std::ostringstream& out) {
  if (parens) out << '(';
  print(e, out);
  if (parens) out << ')';
}

void print(const Expr& e, std::ostringstream& out) {
  switch (e.kind()) {
    case NodeKind::constant:
      if (std::signbit(e.value())) {
        out << '-' << format_double(-e.value());
      } else {
        out << format_double(e.value());
      }
      return;
    case NodeKind::variable: out << 't'; return;
    case NodeKind::neg:
      out << '-';
      print_child(e.children()[0], precedence(e.children()[0]) < 3, out);
      return;
    case NodeKind::call:
      out << function_name(e.function()) << '(';
      print(e.children()[0], out);
      out << ')';
      return;
    case NodeKind::pow:
      print_child(e.children()[0], precedence(e.children()[0]) < 5, out);
      out << '^';
      print_child(e.children()[1], precedence(e.children()[1]) < 3, out);
      return;
    default: {
      int p = precedence(e);
      const char* op = e.kind() == NodeKind::add   ? "+"
                       : e.kind() == NodeKind::sub ? "-"
                       : e.kind() == NodeKind::mul ? "*"
                                                   : "/";
      print_child(e.children()[0], precedence(e.children()[0]) < p, out);
      out << op;
      print_child(e.children()[1], precedence(e.children()[1]) <= p, out);
      return;
    }
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream out;
  print(e, out);
  return out.str();
}

// ---------------------------------------------------------------------------
// Profiles

Profile::Profile(std::string source, Expr e, Expr d1, Expr d2)
    : source_(std::move(source)),
      expr_(std::move(e)),
      d1_(std::move(d1)),
      d2_(std::move(d2)),
      domain_(ProfileDomain::closed_at_zero) {
  try {
    (void)eval(expr_, 0.0);
  } catch (const DomainError&) {
    domain_ = ProfileDomain::open_at_zero;
  }
}

Profile Profile::from_expr(std::string label, Expr e) {
  Expr d1 = differentiate(e);
  Expr d2 = differentiate(d1);
  return Profile(std::move(label), std::move(e), std::move(d1), std::move(d2));
}

Profile Profile::with_derivatives(std::string label, Expr e, Expr d1, Expr d2) {
  return Profile(std::move(label), std::move(e), std::move(d1), std::move(d2));
}

Profile Profile::parse(std::string_view src) { return resolve_profile(src); }

double Profile::log_derivative(double t) const { return eval_ratio(d1_, expr_, t); }
double Profile::second_ratio(double t) const { return eval_ratio(d2_, expr_, t); }

namespace presets {

Profile euclidean() {
  return Profile::with_derivatives("euclidean", variable(), tonelab::constant(1.0), tonelab::constant(0.0));
}

Profile hyperbolic(double kappa) {
  if (!(kappa < 0.0)) throw std::invalid_argument("hyperbolic profile needs kappa < 0");
  const double s = std::sqrt(-kappa);
  const Expr st = tonelab::constant(s) * variable();
  Expr f = call(Function::sinh, st) / tonelab::constant(s);
  Expr d1 = call(Function::cosh, st);
  Expr d2 = tonelab::constant(s) * call(Function::sinh, st);
  return Profile::with_derivatives("hyperbolic:" + format_double(kappa), f, d1, d2);
}

Profile baider_base() {
  const Expr t = variable();
  const Expr g = call(Function::exp, pow(t, tonelab::constant(2.0)));
  Expr f = t * g;
  Expr d1 = (tonelab::constant(1.0) + tonelab::constant(2.0) * pow(t, tonelab::constant(2.0))) * g;
  Expr d2 = (tonelab::constant(6.0) * t + tonelab::constant(4.0) * pow(t, tonelab::constant(3.0))) * g;
  return Profile::with_derivatives("baider_base", f, d1, d2);
}

Profile baider_fiber() {
  const Expr t = variable();
  const Expr g = call(Function::exp, t - pow(t, tonelab::constant(2.0)));
  const Expr lin = tonelab::constant(1.0) - tonelab::constant(2.0) * t;
  Expr d1 = lin * g;
  Expr d2 = (pow(lin, tonelab::constant(2.0)) - tonelab::constant(2.0)) * g;
  return Profile::with_derivatives("baider_fiber", g, d1, d2);
}

Profile constant(double c) {
  return Profile::with_derivatives(format_double(c), tonelab::constant(c), tonelab::constant(0.0),
                                   tonelab::constant(0.0));
}

}  // namespace presets

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Profile resolve_profile(std::string_view name_or_expr) {
  auto s = trim(name_or_expr);
  if (s == "euclidean") return presets::euclidean();
  if (s == "hyperbolic") return presets::hyperbolic(-1.0);
  if (s == "baider_base") return presets::baider_base();
  if (s == "baider_fiber") return presets::baider_fiber();
  constexpr std::string_view hyp = "hyperbolic:";
  if (s.substr(0, hyp.size()) == hyp) {
    auto rest = s.substr(hyp.size());
    double kappa = 0.0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), kappa);
    if (ec != std::errc() || ptr != rest.data() + rest.size())
      throw ParseError("bad curvature in '" + std::string(s) + "'", hyp.size());
    return presets::hyperbolic(kappa);
  }
  return Profile::from_expr(std::string(s), parse_expr(s));
}

}  // namespace tonelab
