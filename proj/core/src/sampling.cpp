#include "tonelab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tonelab {

std::vector<double> linspace(double a, double b, int count) {
  if (count < 2) throw std::invalid_argument("linspace needs at least two points");
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) t[static_cast<std::size_t>(i)] = a + (b - a) * i / (count - 1);
  t.back() = b;
  return t;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Limit of a decreasing sequence sampled at three equally spaced points.
double decreasing_limit(double t0, double t1, double t2, double x0, double x1, double x2) {
  const double d1 = x1 - x0;
  const double d2 = x2 - x1;
  if (d1 >= 0.0 || d2 >= 0.0) return x2;
  const double q = d2 / d1;
  auto ratio = [&](double p) {
    const double a = std::pow(t1, -p) - std::pow(t0, -p);
    const double b = std::pow(t2, -p) - std::pow(t1, -p);
    return b / a;
  };
  constexpr double pmin = 1e-3;
  constexpr double pmax = 60.0;
  if (q >= ratio(pmin)) return -kInf;  // slower than every power
  if (q <= ratio(pmax)) {
    // geometric decay; Aitken
    const double denom = d2 - d1;
    return denom > 0.0 ? x2 - d2 * d2 / denom : x2;
  }
  double lo = pmin, hi = pmax;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ratio(mid) > q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double p = 0.5 * (lo + hi);
  const double c = d1 / (std::pow(t1, -p) - std::pow(t0, -p));
  return x2 - c * std::pow(t2, -p);
}

TailTrend classify_tail(std::span<const double> v, std::size_t start) {
  bool nonincreasing = true;
  bool nondecreasing = true;
  for (std::size_t i = start + 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1]) nonincreasing = false;
    if (v[i] < v[i - 1]) nondecreasing = false;
  }
  if (nonincreasing && nondecreasing) return TailTrend::flat;
  const double drop = v[start] - v.back();
  const double scale = std::max({1.0, std::fabs(v[start]), std::fabs(v.back())});
  if (std::fabs(drop) <= 1e-14 * scale) return TailTrend::flat;
  if (nonincreasing) return TailTrend::decreasing;
  if (nondecreasing) return TailTrend::increasing;
  return TailTrend::none;
}

}  // namespace

ExtremumEstimate infimum(std::span<const double> t, std::span<const double> v, bool extend_right) {
  if (t.size() != v.size() || t.empty()) throw std::invalid_argument("infimum: bad samples");
  ExtremumEstimate e;
  auto it = std::min_element(v.begin(), v.end());
  e.sampled = *it;
  e.at = t[static_cast<std::size_t>(it - v.begin())];
  e.value = e.sampled;
  if (!extend_right || v.size() < 30) return e;

  const std::size_t n = v.size();
  const std::size_t start = n - std::max<std::size_t>(n / 10, 3);
  e.trend = classify_tail(v, start);
  if (e.trend == TailTrend::decreasing) {
    const std::size_t mid = start + (n - 1 - start) / 2;
    const std::size_t end = start + 2 * (mid - start);
    const double limit = decreasing_limit(t[start], t[mid], t[end], v[start], v[mid], v[end]);
    if (limit < e.value) {
      e.value = limit;
      e.trend_limit_used = true;
    }
  }
  return e;
}

ExtremumEstimate supremum(std::span<const double> t, std::span<const double> v, bool extend_right) {
  std::vector<double> neg(v.size());
  std::transform(v.begin(), v.end(), neg.begin(), [](double x) { return -x; });
  ExtremumEstimate e = infimum(t, neg, extend_right);
  e.value = -e.value;
  e.sampled = -e.sampled;
  if (e.trend == TailTrend::decreasing) {
    e.trend = TailTrend::increasing;
  } else if (e.trend == TailTrend::increasing) {
    e.trend = TailTrend::decreasing;
  }
  return e;
}

GrowthAssessment assess_growth(std::span<const double> t, std::span<const double> v, double min_ratio) {
  if (t.size() != v.size() || v.size() < 3) throw std::invalid_argument("assess_growth: bad samples");
  GrowthAssessment g;
  const double scale = std::max(1.0, std::fabs(v.front()));
  g.monotone_increasing = true;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1] - 1e-12 * scale) {
      g.monotone_increasing = false;
      break;
    }
  }
  const std::size_t mid = (v.size() - 1) / 2;
  g.first_half_growth = v[mid] - v.front();
  g.second_half_growth = v.back() - v[mid];
  g.ratio = g.first_half_growth > 0.0 ? g.second_half_growth / g.first_half_growth : 0.0;
  g.unbounded_to_horizon = g.monotone_increasing && g.first_half_growth > 0.0 && g.ratio >= min_ratio;
  return g;
}

}  // namespace tonelab
