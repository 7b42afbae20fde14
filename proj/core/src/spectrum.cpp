#include "tonelab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tonelab/numeric_format.hpp"

namespace tonelab {

std::string_view to_string(EssVerdict v) { return v == EssVerdict::discrete ? "discrete" : "bottom"; }

std::string_view to_string(TransferKind k) {
  switch (k) {
    case TransferKind::equality: return "equality";
    case TransferKind::inequality: return "inequality";
    case TransferKind::no_transfer: return "no-transfer";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool cut_converged(double prev, double cur, double tol) {
  return std::fabs(cur - prev) <= tol * std::max(1.0, std::fabs(cur));
}

}  // namespace

EssEstimate ess_bottom_estimate(const SubmersionModel& model, Space space, const std::vector<double>& R_sequence,
                                const EssPolicy& policy) {
  if (R_sequence.empty()) throw std::invalid_argument("R sequence is empty");
  for (std::size_t i = 0; i < R_sequence.size(); ++i) {
    if (!(R_sequence[i] > 0.0) || !std::isfinite(R_sequence[i]))
      throw std::invalid_argument("R values must be positive and finite");
    if (i > 0 && !(R_sequence[i] > R_sequence[i - 1])) throw std::invalid_argument("R sequence must increase");
  }
  if (policy.max_cuts < 2) throw std::invalid_argument("need at least two cuts");
  if (!(policy.L0 > 0.0)) throw std::invalid_argument("L0 must be positive");
  if (space == Space::total && !model.fiber) throw ModelError("total-space sweep needs a fiber");

  const RadialProblem problem = space == Space::total ? total_space_problem(model, {0, policy.fiber_mode})
                                                      : base_problem(model.base, 0);
  ToneOptions topts;
  topts.grid = policy.grid;

  EssEstimate est;
  est.space = space;
  est.policy = policy;
  const double R_max = R_sequence.back();
  auto cut = [&](int k) { return R_max + policy.L0 * std::ldexp(1.0, k); };
  auto solve = [&](double R, int k) {
    ToneResult r = solve_tone(problem, RadialDomain::annulus(R, cut(k)), topts, {0, policy.fiber_mode});
    est.eigensolves += 2;
    return CutValue{cut(k), r.lambda, r.error_estimate};
  };

  int k_star = 0;
  for (double R : R_sequence) {
    EssPoint p;
    p.R = R;
    for (int k = 0; k < policy.max_cuts; ++k) {
      p.cuts.push_back(solve(R, k));
      if (k > 0 && cut_converged(p.cuts[k - 1].lambda, p.cuts[k].lambda, policy.stop_tol)) {
        p.converged_at = k;
        break;
      }
    }
    k_star = std::max(k_star, static_cast<int>(p.cuts.size()) - 1);
    est.points.push_back(std::move(p));
  }

  // Evaluate every R at the common final cut so the values nest.
  for (auto& p : est.points) {
    while (static_cast<int>(p.cuts.size()) <= k_star) p.cuts.push_back(solve(p.R, static_cast<int>(p.cuts.size())));
    const CutValue& last = p.cuts[static_cast<std::size_t>(k_star)];
    p.lambda = last.lambda;
    p.err = last.err;
    if (k_star > 0) p.err += std::fabs(last.lambda - p.cuts[static_cast<std::size_t>(k_star - 1)].lambda);
    p.above_threshold = p.lambda > policy.threshold;
    if (p.converged_at < 0) est.budget_exhausted = true;
  }

  for (std::size_t i = 1; i < est.points.size(); ++i) {
    const auto& a = est.points[i - 1];
    const auto& b = est.points[i];
    if (b.lambda < a.lambda - (a.err + b.err)) est.monotone_in_R = false;
  }

  const std::size_t n = est.points.size();
  const bool increasing_tail = n >= 3 && est.points[n - 1].lambda > est.points[n - 2].lambda &&
                               est.points[n - 2].lambda > est.points[n - 3].lambda;
  if (increasing_tail && est.points.back().above_threshold) {
    est.verdict = EssVerdict::discrete;
  } else {
    est.verdict = EssVerdict::bottom;
    est.bottom = est.points.back().lambda;
    est.bottom_err = est.points.back().err;
  }
  return est;
}

Certificate discreteness_certificate(const SubmersionModel& model, double horizon, DrivingMode mode,
                                     const CertificateOptions& opts) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("horizon must be positive");
  const double R_star = opts.R_star.value_or(0.5 * horizon);
  if (!(R_star > 0.0 && R_star < horizon)) throw std::invalid_argument("R* must lie in (0, horizon)");
  std::vector<double> t = linspace(R_star, horizon, opts.samples);
  std::vector<double> c(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    c[i] = mode == DrivingMode::h ? h_function(model, t[i]) : l_function(model, t[i]);
  const auto kind = mode == DrivingMode::h ? CertificateKind::h_proper : CertificateKind::l_proper;
  return decide_certificate(kind, std::move(t), std::move(c), horizon, opts);
}

TransferReport submersion_transfer(const EssEstimate& base_estimate, const SubmersionModel& model,
                                   const TransferOptions& opts) {
  if (!model.fiber) throw ModelError("transfer needs a fiber");
  if (base_estimate.points.empty()) throw std::invalid_argument("base estimate has no points");
  const bool base_discrete = base_estimate.verdict == EssVerdict::discrete;
  TransferReport r;

  const double R0 = base_estimate.points.front().R;
  std::vector<double> t = linspace(R0, R0 + opts.span, opts.samples);
  std::vector<double> lv(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) lv[i] = log_fiber_volume(model, t[i]);
  auto [lo, hi] = std::minmax_element(lv.begin(), lv.end());
  r.inf_volume = std::exp(*lo);
  r.sup_volume = std::exp(*hi);

  if (model.fiber->is_minimal()) {
    r.kind = TransferKind::equality;
    if (base_discrete) {
      r.total_discrete = true;
      r.statement = "fibers minimal; base discrete, so the total space is discrete";
    } else {
      r.value = base_estimate.bottom;
      r.statement = "fibers minimal; inf sigma_ess(M) = inf sigma_ess(N) = " + format_double(*base_estimate.bottom);
    }
    return r;
  }

  const GrowthAssessment growth = assess_growth(t, lv);
  if (growth.unbounded_to_horizon) {
    r.kind = TransferKind::no_transfer;
    r.statement = "fiber volume grows without bound on the exterior; no transfer";
    return r;
  }

  r.kind = TransferKind::inequality;
  const ExtremumEstimate inf_est = infimum(t, lv, true);
  r.degenerate = inf_est.value == -kInf || r.inf_volume <= opts.degenerate_ratio * r.sup_volume ||
                 inf_est.trend == TailTrend::decreasing;
  if (r.degenerate) {
    r.statement = "fiber volume is not bounded away from zero on the exterior; the inequality is degenerate";
  } else if (base_discrete) {
    r.statement = "base discrete; the volume inequality gives no finite bound for the total space";
  } else {
    r.upper = r.sup_volume / r.inf_volume * *base_estimate.bottom;
    r.statement = "inf sigma_ess(M) <= " + format_double(*r.upper);
  }
  return r;
}

namespace {

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

}  // namespace

BrooksReport brooks_growth(const SubmersionModel& model, Space space, double r_max, const BrooksOptions& opts) {
  if (!(r_max > 1.0) || !std::isfinite(r_max)) throw std::invalid_argument("r_max must exceed 1");
  if (space == Space::total && !model.fiber) throw ModelError("total-space growth needs a fiber");
  if (opts.samples < 100) throw std::invalid_argument("too few quadrature samples");

  BrooksReport rep;
  rep.space = space;
  rep.r_max = r_max;
  rep.angular_constant = unit_sphere_volume(model.base.dimension() - 1);
  if (space == Space::total) rep.angular_constant *= model.fiber->unit_volume();
  const double log_ang = std::log(rep.angular_constant);

  auto log_w = [&](double r) {
    try {
      double lw = model.base.log_weight(r);
      if (space == Space::total) lw += model.fiber->log_weight(r);
      return lw;
    } catch (const DomainError&) {
      if (r == 0.0) return -kInf;
      throw;
    }
  };

  const std::vector<double> r = linspace(0.0, r_max, opts.samples);
  std::vector<double> logV;
  logV.reserve(r.size());
  double acc = -kInf;
  double prev = log_w(0.0);
  logV.push_back(-kInf);
  double sup_fiber = -kInf;
  if (space == Space::total) sup_fiber = model.fiber->log_weight(0.0);
  for (std::size_t i = 1; i < r.size(); ++i) {
    double cur;
    try {
      cur = log_w(r[i]);
    } catch (const DomainError&) {
      rep.truncated = true;
      break;
    }
    if (!std::isfinite(cur)) {
      rep.truncated = true;
      break;
    }
    const double h = r[i] - r[i - 1];
    acc = log_add(acc, std::log(0.5 * h) + log_add(prev, cur));
    prev = cur;
    logV.push_back(acc + log_ang);
    if (space == Space::total) sup_fiber = std::max(sup_fiber, model.fiber->log_weight(r[i]));
  }
  const std::size_t n = logV.size();
  if (n < 10) throw std::invalid_argument("volume quadrature failed near the pole");
  rep.reached_r = r[n - 1];
  if (space == Space::total) rep.bracket_constant = std::exp(sup_fiber);

  const std::size_t start = static_cast<std::size_t>((1.0 - opts.tail_fraction) * static_cast<double>(n - 1));
  const std::size_t mid = (start + n - 1) / 2;
  for (std::size_t i = start; i < n; ++i) {
    rep.tail_r.push_back(r[i]);
    rep.tail_mu_hat.push_back(logV[i] / r[i]);
  }
  auto slope = [&](std::size_t a, std::size_t b) { return (logV[b] - logV[a]) / (r[b] - r[a]); };
  rep.log_volume_rmax = logV[n - 1];
  rep.mu_estimate = slope(start, n - 1);
  rep.slope_increment = std::fabs(slope(mid, n - 1) - slope(start, mid));
  rep.mu_finite = rep.slope_increment <= opts.slope_increment_tol;
  const std::size_t half = (n - 1) / 2;
  rep.volume_diverges = half > 0 && logV[n - 1] - logV[half] >= std::log(2.0);
  rep.nonempty_essential_spectrum = rep.mu_finite && rep.volume_diverges;
  if (rep.nonempty_essential_spectrum) rep.upper_bound = 0.25 * rep.mu_estimate * rep.mu_estimate;
  return rep;
}

Certificate brooks_certificate(const BrooksReport& report) {
  Certificate c;
  c.kind = CertificateKind::brooks;
  c.sense = BoundSense::upper;
  c.horizon = report.reached_r;
  if (!report.tail_r.empty()) {
    c.R_star = report.tail_r.front();
    auto [lo, hi] = std::minmax_element(report.tail_mu_hat.begin(), report.tail_mu_hat.end());
    c.inf_driving = *lo;
    c.sup_driving = *hi;
    const std::size_t n = report.tail_r.size();
    const std::size_t k = std::min<std::size_t>(21, n);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = k > 1 ? i * (n - 1) / (k - 1) : 0;
      c.witness_t.push_back(report.tail_r[j]);
      c.witness_value.push_back(report.tail_mu_hat[j]);
    }
  }
  if (report.nonempty_essential_spectrum) {
    c.verdict = Verdict::certified_to_horizon;
    c.bound = report.upper_bound;
    c.note = "volume diverges with finite exponential growth; sigma_ess is nonempty";
  } else {
    c.verdict = Verdict::not_certified;
    c.note = report.volume_diverges ? "growth exponent is not finite" : "volume does not diverge";
  }
  return c;
}

}  // namespace tonelab
