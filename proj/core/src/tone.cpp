#include "tonelab/tone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tonelab {

RadialProblem base_problem(const BaseModel& base, int angular_mode) {
  if (angular_mode < 0) throw std::invalid_argument("angular mode must be nonnegative");
  RadialProblem p;
  p.log_weight_terms.push_back([&base](double t) { return base.log_weight(t); });
  if (angular_mode > 0) {
    const double mu = double(angular_mode) * (angular_mode + base.dimension() - 2);
    p.potential = [&base, mu](double t) {
      auto f = base.warp().log_value(t);
      return mu * std::exp(-2.0 * f.log_abs);
    };
  }
  return p;
}

RadialProblem total_space_problem(const SubmersionModel& model, ToneMode mode) {
  if (!model.fiber) throw ModelError("total-space tone needs a fiber");
  const auto& modes = model.fiber->mode_eigenvalues();
  if (mode.fiber < 0 || mode.fiber >= static_cast<int>(modes.size()))
    throw std::invalid_argument("fiber mode index out of range");
  RadialProblem p = base_problem(model.base, mode.angular);
  const FiberModel& fiber = *model.fiber;
  p.log_weight_terms.push_back([&fiber](double t) { return fiber.log_weight(t); });
  const double mu = modes[static_cast<std::size_t>(mode.fiber)];
  if (mu > 0.0) {
    auto angular = p.potential;
    p.potential = [&fiber, mu, angular](double t) {
      auto psi = fiber.warp().log_value(t);
      double v = mu * std::exp(-2.0 * psi.log_abs);
      if (angular) v += angular(t);
      return v;
    };
  }
  return p;
}

ToneResult solve_tone(const RadialProblem& problem, const RadialDomain& domain, const ToneOptions& opts,
                      ToneMode label) {
  domain.validate();
  if (domain.is_exterior()) throw std::invalid_argument("tones need a bounded domain; truncate first");
  EigenOptions eo;
  eo.tol = opts.tol;

  ToneResult r;
  r.domain = domain;
  r.mode = label;

  Grid coarse(domain, opts.grid);
  Eigenpair ec = smallest_eigenpair(assemble(problem, coarse), eo);
  r.lambda_coarse = ec.lambda;
  if (!opts.richardson) {
    r.lambda = r.lambda_fine = ec.lambda;
    r.grids = {opts.grid, opts.grid};
    r.nodes = coarse.nodes();
    r.eigenfunction = std::move(ec.u);
    return r;
  }
  Grid fine(domain, 2 * opts.grid);
  Eigenpair ef = smallest_eigenpair(assemble(problem, fine), eo);
  r.lambda_fine = ef.lambda;
  r.lambda = ef.lambda + (ef.lambda - ec.lambda) / 3.0;
  r.error_estimate = std::fabs(ec.lambda - ef.lambda) / 3.0;
  r.grids = {opts.grid, 2 * opts.grid};
  r.nodes = fine.nodes();
  r.eigenfunction = std::move(ef.u);
  return r;
}

ToneResult fundamental_tone(const BaseModel& base, const RadialDomain& domain, const ToneOptions& opts) {
  ToneResult r = solve_tone(base_problem(base, 0), domain, opts, {0, 0});
  if (opts.check_modes) {
    ToneOptions next = opts;
    next.check_modes = false;
    ToneResult k1 = solve_tone(base_problem(base, 1), domain, next, {1, 0});
    r.next_mode_lambda = k1.lambda;
    r.mode_check_passed = k1.lambda >= r.lambda - (k1.error_estimate + r.error_estimate);
  }
  return r;
}

ToneResult total_space_tone(const SubmersionModel& model, const RadialDomain& domain, int fiber_mode,
                            const ToneOptions& opts) {
  ToneResult r = solve_tone(total_space_problem(model, {0, fiber_mode}), domain, opts, {0, fiber_mode});
  if (opts.check_modes) {
    const int next_mode = fiber_mode + 1;
    if (next_mode < static_cast<int>(model.fiber->mode_eigenvalues().size())) {
      ToneOptions next = opts;
      next.check_modes = false;
      ToneResult j1 = solve_tone(total_space_problem(model, {0, next_mode}), domain, next, {0, next_mode});
      r.next_mode_lambda = j1.lambda;
      r.mode_check_passed = j1.lambda >= r.lambda - (j1.error_estimate + r.error_estimate);
    }
  }
  return r;
}

double rayleigh_quotient(const RadialProblem& problem, const Grid& grid, std::span<const double> u) {
  const int n = grid.size();
  if (static_cast<int>(u.size()) != n) throw std::invalid_argument("sample count does not match grid");
  const bool pole = grid.domain().inner == InnerBoundary::pole_regular;
  const double h = grid.spacing();

  // Everything is scaled by exp(-shift) so steep weights cannot overflow.
  double shift = -std::numeric_limits<double>::infinity();
  std::vector<double> lw(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    lw[static_cast<std::size_t>(i)] = problem.log_weight(grid.node(i));
    shift = std::max(shift, lw[static_cast<std::size_t>(i)]);
  }

  double num = 0.0;
  double den = 0.0;
  for (int k = 0; k <= n; ++k) {
    if (k == 0 && pole) continue;
    const double left = k > 0 ? u[static_cast<std::size_t>(k - 1)] : 0.0;
    const double right = k < n ? u[static_cast<std::size_t>(k)] : 0.0;
    const double jump = right - left;
    if (jump == 0.0) continue;
    const double wf = std::exp(problem.log_weight(grid.face(k)) - shift);
    num += wf * jump * jump / h;
  }
  for (int i = 0; i < n; ++i) {
    const double ui = u[static_cast<std::size_t>(i)];
    const double w = std::exp(lw[static_cast<std::size_t>(i)] - shift);
    den += w * ui * ui * h;
    if (problem.potential) num += problem.potential(grid.node(i)) * w * ui * ui * h;
  }
  if (!(den > 0.0)) throw std::invalid_argument("Rayleigh quotient of the zero function");
  return num / den;
}

}  // namespace tonelab
