#include "tonelab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tonelab {

double log_weight_derivative(const SubmersionModel& model, Space space, double t) {
  if (space == Space::total && model.fiber) return h_function(model, t);
  return radial_laplacian(model.base, t);
}

// ---------------------------------------------------------------------------

RadialField RadialField::symbolic(Profile a) {
  RadialField f;
  f.expr_ = std::move(a);
  return f;
}

RadialField RadialField::sampled(std::vector<double> t, std::vector<double> a, std::vector<double> da) {
  if (t.size() < 2 || a.size() != t.size() || da.size() != t.size())
    throw std::invalid_argument("sampled field needs matching node, value and derivative arrays");
  if (!std::is_sorted(t.begin(), t.end())) throw std::invalid_argument("sampled field nodes must be sorted");
  RadialField f;
  f.nodes_ = std::move(t);
  f.a_ = std::move(a);
  f.da_ = std::move(da);
  return f;
}

namespace {

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double t) {
  if (t < x.front() || t > x.back()) throw DomainError("outside the sampled field range", t);
  auto it = std::upper_bound(x.begin(), x.end(), t);
  if (it == x.end()) return y.back();
  const std::size_t j = static_cast<std::size_t>(it - x.begin());
  const std::size_t i = j - 1;
  const double s = (t - x[i]) / (x[j] - x[i]);
  return (1.0 - s) * y[i] + s * y[j];
}

}  // namespace

double RadialField::value(double t) const {
  if (expr_) return expr_->value(t);
  return interpolate(nodes_, a_, t);
}

double RadialField::derivative(double t) const {
  if (expr_) return expr_->d1(t);
  return interpolate(nodes_, da_, t);
}

double RadialField::lower() const {
  return expr_ ? -std::numeric_limits<double>::infinity() : nodes_.front();
}

double RadialField::upper() const {
  return expr_ ? std::numeric_limits<double>::infinity() : nodes_.back();
}

// ---------------------------------------------------------------------------

namespace {

struct SamplePlan {
  std::vector<double> t;
  bool exterior = false;
};

SamplePlan plan_samples(const RadialDomain& domain, const RadialField& field, const BoundOptions& opts) {
  domain.validate();
  SamplePlan plan;
  plan.exterior = domain.is_exterior();
  const double hi = plan.exterior ? domain.a + opts.exterior_span : domain.b;
  const double from = std::max(domain.a, field.lower());
  const double to = std::min(hi, field.upper());
  if (!(to > from)) throw std::invalid_argument("field and domain do not overlap");
  if (field.is_sampled()) {
    for (double t : field.nodes())
      if (t >= from && t <= to) plan.t.push_back(t);
    plan.exterior = plan.exterior && to >= hi;
  } else {
    plan.t = linspace(from, to, opts.samples);
  }
  return plan;
}

// Evaluates g on the plan, dropping endpoint samples where the radial
// functions are singular (the pole).
void evaluate(const SamplePlan& plan, const std::function<double(double)>& g, std::vector<double>& ts,
              std::vector<double>& vs) {
  for (std::size_t i = 0; i < plan.t.size(); ++i) {
    const double t = plan.t[i];
    try {
      const double v = g(t);
      if (!std::isfinite(v)) throw DomainError("non-finite field value", t);
      ts.push_back(t);
      vs.push_back(v);
    } catch (const DomainError&) {
      if (i != 0 && i + 1 != plan.t.size()) throw;
    }
  }
  // An endpoint value that jumps by orders of magnitude across one cell is a
  // singularity that floating point failed to report (sin(pi) != 0).
  auto singular = [](double end, double next) { return std::fabs(end - next) > 1e8 * std::max(1.0, std::fabs(next)); };
  if (vs.size() > 2 && singular(vs.back(), vs[vs.size() - 2])) {
    ts.pop_back();
    vs.pop_back();
  }
  if (vs.size() > 2 && singular(vs.front(), vs[1])) {
    ts.erase(ts.begin());
    vs.erase(vs.begin());
  }
  if (ts.size() < 2) throw std::invalid_argument("too few valid samples for a bound");
}

}  // namespace

BoundReport divergence_bound(const SubmersionModel& model, Space space, const RadialDomain& domain,
                             const RadialField& field, const BoundOptions& opts) {
  const SamplePlan plan = plan_samples(domain, field, opts);
  std::vector<double> td, div, ta, mag;
  evaluate(
      plan,
      [&](double t) { return field.derivative(t) + field.value(t) * log_weight_derivative(model, space, t); },
      td, div);
  evaluate(plan, [&](double t) { return std::fabs(field.value(t)); }, ta, mag);

  BoundReport r;
  r.samples = static_cast<int>(td.size());
  r.sample_from = td.front();
  r.sample_to = td.back();
  r.inf_divergence = infimum(td, div, plan.exterior);
  r.sup_field = supremum(ta, mag, plan.exterior);
  const double inf_div = r.inf_divergence->value;
  const double sup_a = r.sup_field->value;
  if (!(inf_div > 0.0)) {
    r.status = BoundStatus::hypothesis_failed;
    r.note = "inf div X is not positive";
    return r;
  }
  if (!std::isfinite(sup_a) || !(sup_a > 0.0)) {
    r.status = BoundStatus::hypothesis_failed;
    r.note = "sup |X| is not finite and positive";
    return r;
  }
  const double q = inf_div / sup_a;
  r.bound = 0.25 * q * q;
  return r;
}

BoundReport logderivative_bound(const std::function<double(double)>& dlogw, const RadialDomain& domain,
                                const RadialField& field, const BoundOptions& opts) {
  const SamplePlan plan = plan_samples(domain, field, opts);
  std::vector<double> ts, vs;
  evaluate(
      plan,
      [&](double t) {
        const double a = field.value(t);
        return field.derivative(t) + a * dlogw(t) - a * a;
      },
      ts, vs);
  BoundReport r;
  r.samples = static_cast<int>(ts.size());
  r.sample_from = ts.front();
  r.sample_to = ts.back();
  r.inf_combined = infimum(ts, vs, plan.exterior);
  r.bound = r.inf_combined->value;
  if (!std::isfinite(*r.bound)) {
    r.bound.reset();
    r.status = BoundStatus::hypothesis_failed;
    r.note = "div X - |X|^2 is unbounded below";
  }
  return r;
}

BoundReport logderivative_bound(const SubmersionModel& model, Space space, const RadialDomain& domain,
                                const RadialField& field, const BoundOptions& opts) {
  return logderivative_bound([&](double t) { return log_weight_derivative(model, space, t); }, domain, field,
                             opts);
}

RadialField eigenfield_from_tone(const ToneResult& tone, double cutoff) {
  const auto& t = tone.nodes;
  const auto& u = tone.eigenfunction;
  const std::size_t n = u.size();
  if (n < 3 || t.size() != n) throw std::invalid_argument("tone carries no eigenfunction");
  if (!(cutoff > 0.0 && cutoff < 1.0)) throw std::invalid_argument("cutoff must lie in (0, 1)");
  if (std::any_of(u.begin(), u.end(), [](double x) { return x < 0.0; }))
    throw std::invalid_argument("eigenfunction changes sign");

  const double h = t[1] - t[0];
  const bool pole = tone.domain.inner == InnerBoundary::pole_regular;
  auto at = [&](std::ptrdiff_t i) {
    if (i < 0) return pole ? u[0] : 0.0;
    if (i >= static_cast<std::ptrdiff_t>(n)) return 0.0;
    return u[static_cast<std::size_t>(i)];
  };

  const std::size_t peak = static_cast<std::size_t>(std::max_element(u.begin(), u.end()) - u.begin());
  const double threshold = cutoff * u[peak];
  std::size_t lo = peak, hi = peak;
  while (lo > 0 && u[lo - 1] > threshold) --lo;
  while (hi + 1 < n && u[hi + 1] > threshold) ++hi;

  std::vector<double> ts, as, das;
  for (std::size_t i = lo; i <= hi; ++i) {
    const auto k = static_cast<std::ptrdiff_t>(i);
    const double ui = u[i];
    const double du = (at(k + 1) - at(k - 1)) / (2.0 * h);
    const double d2u = (at(k + 1) - 2.0 * ui + at(k - 1)) / (h * h);
    const double a = -du / ui;
    ts.push_back(t[i]);
    as.push_back(a);
    das.push_back(-d2u / ui + a * a);
  }
  return RadialField::sampled(std::move(ts), std::move(as), std::move(das));
}

VolumeRatioReport volume_ratio_check(const SubmersionModel& model, const RadialDomain& domain,
                                     const ToneResult& base_tone, const ToneResult& total_tone, int samples) {
  if (!model.fiber) throw ModelError("volume ratio check needs a fiber");
  domain.validate();
  if (domain.is_exterior()) throw std::invalid_argument("volume ratio check needs a bounded domain");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double t : linspace(domain.a, domain.b, samples)) {
    const double lv = log_fiber_volume(model, t);
    lo = std::min(lo, lv);
    hi = std::max(hi, lv);
  }
  VolumeRatioReport r;
  r.inf_volume = std::exp(lo);
  r.sup_volume = std::exp(hi);
  r.lhs = r.inf_volume * total_tone.lambda;
  r.rhs = r.sup_volume * base_tone.lambda;
  r.tolerance = r.inf_volume * total_tone.error_estimate + r.sup_volume * base_tone.error_estimate +
                1e-12 * std::fabs(r.rhs);
  r.slack = r.rhs - r.lhs;
  r.pass = r.slack >= -r.tolerance;
  return r;
}

}  // namespace tonelab
