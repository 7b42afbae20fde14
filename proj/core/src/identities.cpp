#include "tonelab/identities.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "tonelab/sampling.hpp"

namespace tonelab {

namespace {

struct Weights {
  Expr F;  // f^(n-1)
  Expr W;  // f^(n-1) psi^m
  Expr V;  // unit volume * psi^m
};

Weights build_weights(const SubmersionModel& model) {
  if (!model.fiber) throw ModelError("identity checks need a fiber");
  const auto& fiber = *model.fiber;
  const Expr F = pow(model.base.warp().expr(), constant(model.base.dimension() - 1.0));
  const Expr psi_m = pow(fiber.warp().expr(), constant(static_cast<double>(fiber.dimension())));
  return {F, F * psi_m, constant(fiber.unit_volume()) * psi_m};
}

void check_options(const IdentityOptions& opts) {
  if (!(opts.from > 0.0 && opts.to > opts.from)) throw std::invalid_argument("identity range must satisfy 0 < from < to");
  if (opts.samples < 2) throw std::invalid_argument("identity checks need at least two samples");
  if (opts.sign != 1 && opts.sign != -1) throw std::invalid_argument("sign must be +1 or -1");
}

// Compares (weight * g)'/weight, built symbolically, against rhs(t).
ResidualReport run_check(std::string name, const Expr& weight, const Expr& g, const std::function<double(double)>& rhs,
                         const IdentityOptions& opts) {
  check_options(opts);
  const Expr product = weight * g;
  const Expr dproduct = differentiate(product);
  auto lhs = [&](double t) { return eval_ratio(dproduct, weight, t); };

  ResidualReport r;
  r.check = std::move(name);
  r.samples = opts.samples;
  r.tolerance = opts.tolerance;
  for (double t : linspace(opts.from, opts.to, opts.samples)) {
    const double res = std::fabs(lhs(t) - rhs(t));
    if (!(res <= r.max_residual)) {
      r.max_residual = res;
      r.argmax_t = t;
    }
  }
  r.pass = r.max_residual < opts.tolerance;

  std::mt19937_64 rng(0x5eedu);
  std::uniform_real_distribution<double> pick(opts.from, opts.to);
  for (int i = 0; i < opts.fd_points; ++i) {
    const double t = pick(rng);
    const double h = 1e-5 * std::max(1.0, t);
    const double lw = eval_log(weight, t).log_abs;
    auto scaled = [&](double s) { return std::exp(eval_log(weight, s).log_abs - lw) * eval(g, s); };
    const double fd = (scaled(t + h) - scaled(t - h)) / (2.0 * h);
    const double sym = lhs(t);
    r.fd_discrepancy = std::max(r.fd_discrepancy, std::fabs(sym - fd) / std::max(1.0, std::fabs(sym)));
  }
  return r;
}

}  // namespace

ResidualReport check_divergence_identity(const SubmersionModel& model, const Profile& a, const IdentityOptions& opts) {
  const Weights w = build_weights(model);
  const Expr dFa = differentiate(w.F * a.expr());
  return run_check(
      "divergence", w.W, a.expr(),
      [&](double t) { return eval_ratio(dFa, w.F, t) + opts.sign * a.value(t) * mean_curvature_radial(model, t); },
      opts);
}

ResidualReport check_laplacian_lift(const SubmersionModel& model, const Profile& phi, const IdentityOptions& opts) {
  const Weights w = build_weights(model);
  const Expr dphi = phi.d1_expr();
  const Expr dFphi = differentiate(w.F * dphi);
  return run_check(
      "laplacian-lift", w.W, dphi,
      [&](double t) { return eval_ratio(dFphi, w.F, t) + opts.sign * phi.d1(t) * mean_curvature_radial(model, t); },
      opts);
}

ResidualReport check_grad_average(const SubmersionModel& model, const Profile& phi, const IdentityOptions& opts) {
  const Weights w = build_weights(model);
  return run_check(
      "grad-average", w.V, phi.expr(),
      [&](double t) { return phi.d1(t) + opts.sign * phi.value(t) * mean_curvature_radial(model, t); }, opts);
}

SignResolution resolve_sign_convention(const SubmersionModel& model, const IdentityOptions& opts) {
  const Profile one = presets::constant(1.0);
  IdentityOptions plus = opts;
  plus.sign = +1;
  IdentityOptions minus = opts;
  minus.sign = -1;
  SignResolution s;
  s.plus = check_divergence_identity(model, one, plus);
  s.minus = check_divergence_identity(model, one, minus);
  s.degenerate = s.plus.pass && s.minus.pass;
  if (s.degenerate) {
    s.sign = +1;
    return s;
  }
  const bool plus_wins = s.plus.max_residual <= s.minus.max_residual;
  s.sign = plus_wins ? +1 : -1;
  const ResidualReport& kept = plus_wins ? s.plus : s.minus;
  const ResidualReport& rejected = plus_wins ? s.minus : s.plus;
  s.separated = kept.pass && rejected.max_residual > 10.0 * opts.tolerance;
  return s;
}

}  // namespace tonelab
