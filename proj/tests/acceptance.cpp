// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Randomized suites use fixed seeds.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "support/random_profiles.hpp"
#include "tonelab/bounds.hpp"
#include "tonelab/comparison.hpp"
#include "tonelab/identities.hpp"
#include "tonelab/scenario.hpp"
#include "tonelab/spectrum.hpp"

using namespace tonelab;
namespace tt = tonelab::testing;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [failed]");
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

bool within_rel(double x, double target, double rel) { return std::abs(x - target) <= rel * std::abs(target); }

SubmersionModel base_only(Profile f) { return {BaseModel(2, std::move(f)), std::nullopt}; }

SubmersionModel with_circle(Profile f, Profile psi) {
  return {BaseModel(2, std::move(f)), FiberModel::circle(std::move(psi))};
}

RadialDomain random_domain(tt::Engine& rng) {
  if (tt::uniform_int(rng, 0, 1) == 0) return RadialDomain::ball(tt::uniform(rng, 0.5, 4.0));
  const double a = tt::uniform(rng, 0.1, 3.0);
  return RadialDomain::annulus(a, a + tt::uniform(rng, 0.3, 3.0));
}

// 1. Hyperbolic bottoms.
Outcome hyperbolic_bottom() {
  Outcome o;
  const double ball = fundamental_tone(BaseModel(2, presets::hyperbolic(-1)), RadialDomain::ball(16.0)).lambda;
  o.require(within_rel(ball, 0.25, 0.02), "ball R=16 tone " + fmt("%.6f", ball) + " vs 0.25 +- 2%");
  const auto e1 = ess_bottom_estimate(base_only(presets::hyperbolic(-1)), Space::base, {1, 2, 4, 8});
  const double b1 = e1.bottom.value_or(NAN);
  o.require(within_rel(b1, 0.25, 0.01), "ess(k=-1) " + fmt("%.6f", b1));
  const auto e4 = ess_bottom_estimate(base_only(presets::hyperbolic(-4)), Space::base, {1, 2, 4, 8});
  const double b4 = e4.bottom.value_or(NAN);
  o.require(within_rel(b4, 1.0, 0.01), "ess(k=-4) " + fmt("%.6f", b4));
  return o;
}

// 2. Constant fibers leave tones unchanged.
Outcome minimal_fiber_equality() {
  Outcome o;
  tt::Engine rng(101);
  const std::vector<Profile> bases{presets::euclidean(), presets::hyperbolic(-1), presets::baider_base()};
  double worst = 0.0;
  for (const auto& f : bases) {
    for (int i = 0; i < 10; ++i) {
      const double c = tt::uniform(rng, 0.05, 20.0);
      const auto m = with_circle(f, presets::constant(c));
      const auto dom = random_domain(rng);
      worst = std::max(worst, std::abs(total_space_tone(m, dom).lambda - fundamental_tone(m.base, dom).lambda));
    }
  }
  o.require(worst <= 1e-10, "max |total - base| over 30 cases " + fmt("%.3g", worst));
  return o;
}

// 3. Fiber volume ratio inequality.
Outcome volume_ratio() {
  Outcome o;
  tt::Engine rng(202);
  int violations = 0;
  double min_slack = INFINITY;
  for (int i = 0; i < 20; ++i) {
    const auto m = with_circle(Profile::parse(tt::random_warp(rng)), Profile::parse(tt::random_bounded_fiber(rng)));
    const auto dom = random_domain(rng);
    const auto r = volume_ratio_check(m, dom, fundamental_tone(m.base, dom), total_space_tone(m, dom));
    violations += !r.pass;
    min_slack = std::min(min_slack, r.slack / r.rhs);
  }
  o.require(violations == 0, std::to_string(violations) + " violations in 20 cases, min relative slack " +
                                 fmt("%.3g", min_slack));
  return o;
}

// 4. Eigenfield bound attains the tone; both estimators are sound.
Outcome bound_estimates() {
  Outcome o;
  struct Fixture {
    const char* name;
    SubmersionModel model;
    Space space;
    RadialDomain domain;
  };
  const std::vector<Fixture> fixtures{
      {"H2 [1,2]", base_only(presets::hyperbolic(-1)), Space::base, RadialDomain::annulus(1, 2)},
      {"R2 [1,2]", base_only(presets::euclidean()), Space::base, RadialDomain::annulus(1, 2)},
      {"R2 disk", base_only(presets::euclidean()), Space::base, RadialDomain::ball(1)},
      {"baider total [2,4]", with_circle(presets::baider_base(), presets::baider_fiber()), Space::total,
       RadialDomain::annulus(2, 4)},
      {"H2 ball 5", base_only(presets::hyperbolic(-1)), Space::base, RadialDomain::ball(5)},
  };
  double worst_gap = 0.0;
  for (const auto& fx : fixtures) {
    const auto tone = fx.space == Space::total ? total_space_tone(fx.model, fx.domain)
                                               : fundamental_tone(fx.model.base, fx.domain);
    const auto r = logderivative_bound(fx.model, fx.space, fx.domain, eigenfield_from_tone(tone, 0.1));
    const double gap = r.bound ? std::abs(*r.bound - tone.lambda) : INFINITY;
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-3) o.require(false, std::string(fx.name) + " gap " + fmt("%.3g", gap));
  }
  o.require(worst_gap <= 1e-3, "eigenfield gap max " + fmt("%.3g", worst_gap) + " over 5 fixtures");

  tt::Engine rng(303);
  int violations = 0, bounds = 0;
  for (int i = 0; i < 40; ++i) {
    const auto m = with_circle(Profile::parse(tt::random_warp(rng)), Profile::parse(tt::random_fiber(rng)));
    const double a = tt::uniform(rng, 0.2, 3.0);
    const auto dom = RadialDomain::annulus(a, a + tt::uniform(rng, 0.3, 2.5));
    const Space sp = i % 2 ? Space::total : Space::base;
    const auto tone = sp == Space::total ? total_space_tone(m, dom) : fundamental_tone(m.base, dom);
    const double tol = tone.error_estimate + 1e-8 * tone.lambda;
    const auto field = RadialField::symbolic(Profile::parse(tt::random_polynomial(rng)));
    for (const auto& r : {divergence_bound(m, sp, dom, field), logderivative_bound(m, sp, dom, field)}) {
      if (!r.bound) continue;
      ++bounds;
      violations += *r.bound > tone.lambda + tol;
    }
  }
  o.require(violations == 0, std::to_string(violations) + " soundness violations in " + std::to_string(bounds) +
                                 " bounds");
  return o;
}

// 5. Certificate constant for t exp(t^2) with trivial fibers.
Outcome proper_h_certificate() {
  Outcome o;
  const auto dl = with_circle(presets::baider_base(), presets::constant(1.0));
  CertificateOptions co;
  co.R_star = 2.0;
  const auto c = discreteness_certificate(dl, 20.0, DrivingMode::h, co);
  const double bound = c.bound.value_or(NAN);
  o.require(c.verdict == Verdict::certified_to_horizon && std::abs(bound - 5.0625) <= 1e-9,
            "bound " + fmt("%.12f", bound));
  const auto est = ess_bottom_estimate(dl, Space::base, {2, 8, 16, 24, 32, 36});
  int below = 0, total = 0;
  double lowest = INFINITY;
  for (const auto& p : est.points) {
    if (p.R < 2.0) continue;
    for (const auto& cut : p.cuts) {
      ++total;
      lowest = std::min(lowest, cut.lambda);
      below += cut.lambda < 5.0625 - (cut.err + 1e-9 * cut.lambda);
    }
  }
  o.require(below == 0, std::to_string(total) + " sweep tones, lowest " + fmt("%.6f", lowest));
  return o;
}

// 6. Discrete base, non-discrete total space.
Outcome baider_dichotomy() {
  Outcome o;
  const auto b = with_circle(presets::baider_base(), presets::baider_fiber());
  const auto base = ess_bottom_estimate(b, Space::base, {4, 8, 16, 24, 32, 36});
  const double last = base.points.back().lambda;
  o.require(base.verdict == EssVerdict::discrete && last > 1e3,
            "base " + std::string(to_string(base.verdict)) + ", last " + fmt("%.1f", last));
  EssPolicy pol;
  pol.L0 = 32;
  const auto total = ess_bottom_estimate(b, Space::total, {4, 6, 8, 10}, pol);
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& p : total.points) {
    for (const auto& c : p.cuts) {
      lo = std::min(lo, c.lambda);
      hi = std::max(hi, c.lambda);
    }
  }
  o.require(lo >= 0.2 && hi <= 0.3, "total tones in [" + fmt("%.4f", lo) + ", " + fmt("%.4f", hi) + "]");
  CertificateOptions co;
  co.R_star = 2.0;
  const auto cert = discreteness_certificate(b, 20.0, DrivingMode::h, co);
  o.require(cert.verdict == Verdict::not_certified && cert.sup_driving <= 1.6,
            std::string(to_string(cert.verdict)) + ", sup h " + fmt("%.4f", cert.sup_driving));
  const auto br = brooks_growth(b, Space::total, 30.0);
  o.require(std::abs(br.mu_estimate - 1.0) <= 0.05 && br.volume_diverges,
            "Brooks mu " + fmt("%.4f", br.mu_estimate) + (br.volume_diverges ? ", vol -> inf" : ", vol bounded"));
  return o;
}

// 7. Jacobi solutions and the Laplacian comparison.
Outcome jacobi_comparison() {
  Outcome o;
  const auto one = solve_jacobi(presets::constant(1.0), 2.0, 1e-3);
  double err = 0.0;
  for (double t = 0.0; t <= 2.0; t += 1e-2) err = std::max(err, std::abs(one.value(t) - std::sinh(t)));
  o.require(err <= 1e-8, "sinh error " + fmt("%.3g", err));
  const double e1 = solve_jacobi(presets::constant(1.0), 2.0, 0.1).value(2.0) - std::sinh(2.0);
  const double e2 = solve_jacobi(presets::constant(1.0), 2.0, 0.05).value(2.0) - std::sinh(2.0);
  o.require(e1 / e2 >= 14.0 && e1 / e2 <= 18.0, "order ratio " + fmt("%.3f", e1 / e2));
  const auto g = solve_jacobi(Profile::parse("4*t^2+6"), 2.0, 1e-3);
  double gerr = 0.0;
  for (double t = 0.0; t <= 2.0; t += 1e-2) {
    const double exact = t * std::exp(t * t);
    gerr = std::max(gerr, std::abs(g.value(t) - exact) / std::max(1.0, exact));
  }
  o.require(gerr <= 1e-6, "t exp(t^2) relative error " + fmt("%.3g", gerr));

  struct Case {
    Profile f;
    Profile G;
    double T;
  };
  std::vector<Case> cases{{presets::hyperbolic(-1), presets::constant(1.0), 10},
                          {presets::hyperbolic(-4), presets::constant(4.0), 10},
                          {presets::hyperbolic(-4), presets::constant(1.0), 10},
                          {presets::baider_base(), Profile::parse("4*t^2+6"), 10},
                          {presets::baider_base(), presets::constant(1.0), 10},
                          {presets::baider_base(), Profile::parse("4*t^2"), 10},
                          {presets::euclidean(), presets::constant(0.0), 20}};
  int met = 0, failed = 0;
  double worst = 0.0;
  for (const auto& c : cases) {
    const auto r = comparison_check(BaseModel(2, c.f), c.G, c.T);
    if (!r.hypothesis_met) continue;
    ++met;
    worst = std::max(worst, r.max_violation);
    failed += !(r.pass && r.max_violation < 1e-6);
  }
  o.require(failed == 0 && met == static_cast<int>(cases.size()),
            std::to_string(met) + " fixtures, max violation " + fmt("%.3g", worst));
  return o;
}

// 8. Identity suite and sign resolution.
Outcome identity_suite() {
  Outcome o;
  std::vector<SubmersionModel> presets_list{
      with_circle(presets::baider_base(), presets::baider_fiber()),
      with_circle(presets::baider_base(), presets::constant(1.0)),
      with_circle(presets::hyperbolic(-1), presets::constant(2.0)),
      with_circle(presets::euclidean(), presets::baider_fiber()),
      {BaseModel(3, presets::hyperbolic(-1)), FiberModel(3, Profile::parse("exp(t)"), unit_sphere_volume(3), {0.0})},
  };
  int fails = 0, checks = 0;
  auto run = [&](const SubmersionModel& m, const Profile& a, const Profile& phi, const IdentityOptions& opts) {
    for (const auto& r : {check_divergence_identity(m, a, opts), check_laplacian_lift(m, phi, opts),
                          check_grad_average(m, phi, opts)}) {
      ++checks;
      fails += !(r.pass && r.max_residual < 1e-7);
    }
  };
  for (const auto& m : presets_list) {
    run(m, presets::constant(1.0), Profile::parse("t"), {});
    run(m, Profile::parse("t"), Profile::parse("sinh(t)"), {});
  }
  tt::Engine rng(404);
  int sign_fails = 0, nondegenerate = 0;
  for (int i = 0; i < 50; ++i) {
    const int m = tt::uniform_int(rng, 1, 3);
    SubmersionModel model{BaseModel(tt::uniform_int(rng, 2, 4), Profile::parse(tt::random_warp(rng))),
                          FiberModel(m, Profile::parse(tt::random_fiber(rng)), unit_sphere_volume(m), {0.0})};
    IdentityOptions opts;
    opts.to = 3.0;
    run(model, Profile::parse(tt::random_polynomial(rng)), Profile::parse(tt::random_polynomial(rng)), opts);
    const auto s = resolve_sign_convention(model, opts);
    if (s.degenerate) continue;
    ++nondegenerate;
    sign_fails += !(s.sign == 1 && s.separated);
  }
  for (const auto& m : presets_list) {
    const auto s = resolve_sign_convention(m);
    if (s.degenerate) continue;
    ++nondegenerate;
    sign_fails += !(s.sign == 1 && s.separated);
  }
  o.require(fails == 0, std::to_string(checks - fails) + "/" + std::to_string(checks) + " identity checks");
  o.require(sign_fails == 0, "sign +1 separated on " + std::to_string(nondegenerate - sign_fails) + "/" +
                                 std::to_string(nondegenerate) + " nondegenerate fixtures");
  return o;
}

// 9. Solver fixtures.
Outcome solver_fixtures() {
  Outcome o;
  const auto flat = smallest_eigenpair(assemble(RadialProblem{}, Grid(RadialDomain::annulus(0, pi), 4096)));
  o.require(std::abs(flat.lambda - 1.0) <= 1e-6, "w=1 on [0,pi] " + fmt("%.9f", flat.lambda));
  const double disk = fundamental_tone(BaseModel(2, presets::euclidean()), RadialDomain::ball(1.0)).lambda;
  o.require(std::abs(disk - 5.78319) <= 1e-3, "unit disk " + fmt("%.6f", disk));
  const BaseModel h(2, presets::hyperbolic(-1));
  auto lam = [&](int n) {
    return smallest_eigenpair(assemble(base_problem(h), Grid(RadialDomain::annulus(1, 3), n))).lambda;
  };
  const double l1 = lam(512), l2 = lam(1024), l3 = lam(2048);
  const double ratio = (l1 - l2) / (l2 - l3);
  o.require(std::abs(ratio - 4.0) <= 0.8, "Richardson ratio " + fmt("%.3f", ratio));
  return o;
}

// 10. Parser and differentiation properties.
Outcome parser_properties() {
  Outcome o;
  tt::Engine rng(505);
  double worst_d = 0.0, worst_rt = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Expr e = tt::random_expr(rng, tt::uniform_int(rng, 2, 4));
    const Expr d = differentiate(e);
    const Expr back = parse_expr(to_string(e));
    for (int k = 0; k < 50; ++k) {
      const double t = 0.2 + 2.8 * k / 49.0;
      const double sym = eval(d, t);
      worst_d = std::max(worst_d, std::abs(sym - tt::finite_derivative(e, t)) / std::max(1.0, std::abs(sym)));
      const double v = eval(e, t);
      worst_rt = std::max(worst_rt, std::abs(eval(back, t) - v) / std::max(1.0, std::abs(v)));
    }
  }
  o.require(worst_d < 1e-6, "derivative vs differences " + fmt("%.3g", worst_d));
  o.require(worst_rt <= 1e-12, "round trip " + fmt("%.3g", worst_rt));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"hyperbolic bottom", hyperbolic_bottom},
      {"minimal-fiber tone equality", minimal_fiber_equality},
      {"fiber volume ratio inequality", volume_ratio},
      {"bound estimates", bound_estimates},
      {"h-proper certificate", proper_h_certificate},
      {"discrete base, non-discrete total", baider_dichotomy},
      {"Jacobi and comparison", jacobi_comparison},
      {"identity suite", identity_suite},
      {"solver fixtures", solver_fixtures},
      {"parser properties", parser_properties},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !out.pass;
    std::printf("criterion %2zu %s  %s: %s (%.2f s)\n", i + 1, out.pass ? "PASS" : "FAIL", criteria[i].first,
                out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
