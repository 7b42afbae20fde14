#pragma once

// Random expression trees and model profiles shared by the unit tests and
// the acceptance runner. Every generator takes an explicit engine so that
// each suite is reproducible from its seed.

#include <cmath>
#include <random>
#include <string>

#include "tonelab/profiles.hpp"

namespace tonelab::testing {

using Engine = std::mt19937_64;

inline double uniform(Engine& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline int uniform_int(Engine& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Rounded so that printed constants survive a text round trip unchanged.
inline Expr random_constant(Engine& rng, double lo = -2.0, double hi = 2.0) {
  return constant(std::round(uniform(rng, lo, hi) * 1000.0) / 1000.0);
}

/// 1 + g^2, a strictly positive wrapper used for divisors and log/sqrt
/// arguments so that every generated tree is defined for all t.
inline Expr positive(const Expr& g) { return constant(1.0) + pow(g, constant(2.0)); }

/// A tree of the given depth over t that is finite on t in (0, 3]. Growth
/// is kept moderate by bounding exp arguments with tanh or sin.
inline Expr random_expr(Engine& rng, int depth) {
  if (depth <= 0) return uniform_int(rng, 0, 2) == 0 ? random_constant(rng) : variable();
  const int pick = uniform_int(rng, 0, 12);
  auto sub = [&] { return random_expr(rng, depth - 1); };
  switch (pick) {
    case 0: return sub() + sub();
    case 1: return sub() - sub();
    case 2:
    case 3: return sub() * sub();
    case 4: return sub() / positive(sub());
    case 5: return pow(sub(), constant(static_cast<double>(uniform_int(rng, 2, 3))));
    case 6: return call(Function::exp, call(Function::tanh, sub()));
    case 7: return call(Function::log, positive(sub()));
    case 8: return call(Function::sqrt, positive(sub()));
    case 9: return call(Function::sin, sub());
    case 10: return call(Function::cos, sub());
    case 11: return call(uniform_int(rng, 0, 1) ? Function::sinh : Function::cosh, call(Function::sin, sub()));
    default: return -sub();
  }
}

/// Central difference with one Richardson step; error O(h^4).
inline double finite_derivative(const Expr& e, double t, double h = 1e-3) {
  auto d = [&](double s) { return (eval(e, t + s) - eval(e, t - s)) / (2.0 * s); };
  return (4.0 * d(h / 2.0) - d(h)) / 3.0;
}

/// Warps with f(0) = 0, f'(0) = 1 and f > 0 on (0, inf).
inline std::string random_warp(Engine& rng) {
  const double c = std::round(uniform(rng, 0.1, 1.5) * 100.0) / 100.0;
  switch (uniform_int(rng, 0, 2)) {
    case 0: return "t*exp(" + std::to_string(c) + "*t^2)";
    case 1: return "sinh(" + std::to_string(c) + "*t)/" + std::to_string(c);
    default: return "t+" + std::to_string(c) + "*t^3";
  }
}

/// Positive fiber profiles of polynomial-exponential type.
inline std::string random_fiber(Engine& rng) {
  const double a = std::round(uniform(rng, -1.0, 1.0) * 100.0) / 100.0;
  const double b = std::round(uniform(rng, 0.05, 0.8) * 100.0) / 100.0;
  switch (uniform_int(rng, 0, 2)) {
    case 0: return "exp(" + std::to_string(a) + "*t-" + std::to_string(b) + "*t^2)";
    case 1: return "1+" + std::to_string(b) + "*t^2";
    default: return "cosh(" + std::to_string(b) + "*t)";
  }
}

/// Bounded fiber profiles, between 1 - b and 1 + b.
inline std::string random_bounded_fiber(Engine& rng) {
  const double b = std::round(uniform(rng, 0.05, 0.6) * 100.0) / 100.0;
  const double k = std::round(uniform(rng, 0.3, 3.0) * 100.0) / 100.0;
  switch (uniform_int(rng, 0, 1)) {
    case 0: return "1+" + std::to_string(b) + "*sin(" + std::to_string(k) + "*t)";
    default: return "1+" + std::to_string(b) + "*tanh(" + std::to_string(k) + "*t-1)";
  }
}

/// A cubic polynomial in t with random coefficients.
inline std::string random_polynomial(Engine& rng) {
  std::string s = std::to_string(std::round(uniform(rng, -2.0, 2.0) * 100.0) / 100.0);
  for (int k = 1; k <= 3; ++k)
    s += "+(" + std::to_string(std::round(uniform(rng, -2.0, 2.0) * 100.0) / 100.0) + ")*t^" + std::to_string(k);
  return s;
}

}  // namespace tonelab::testing
