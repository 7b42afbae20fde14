#include "tonelab/certificate.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tonelab {

std::string_view to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::h_proper: return "h-proper";
    case CertificateKind::l_proper: return "l-proper";
    case CertificateKind::radial_curvature: return "radial-curvature";
    case CertificateKind::brooks: return "brooks";
  }
  return "?";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::certified_to_horizon: return "certified-to-horizon";
    case Verdict::not_certified: return "not-certified";
    case Verdict::hypothesis_failed: return "hypothesis-failed";
  }
  return "?";
}

std::string_view to_string(BoundSense s) { return s == BoundSense::lower ? "lower" : "upper"; }

CertificateKind parse_certificate_kind(std::string_view s) {
  for (auto k : {CertificateKind::h_proper, CertificateKind::l_proper, CertificateKind::radial_curvature,
                 CertificateKind::brooks})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown certificate kind '" + std::string(s) + "'");
}

Verdict parse_verdict(std::string_view s) {
  for (auto v : {Verdict::certified_to_horizon, Verdict::not_certified, Verdict::hypothesis_failed})
    if (to_string(v) == s) return v;
  throw std::invalid_argument("unknown verdict '" + std::string(s) + "'");
}

BoundSense parse_bound_sense(std::string_view s) {
  if (s == "lower") return BoundSense::lower;
  if (s == "upper") return BoundSense::upper;
  throw std::invalid_argument("unknown bound sense '" + std::string(s) + "'");
}

Certificate decide_certificate(CertificateKind kind, std::vector<double> t, std::vector<double> driving,
                               double horizon, const CertificateOptions& opts) {
  if (t.size() != driving.size() || t.size() < 3) throw std::invalid_argument("certificate needs tail samples");
  Certificate c;
  c.kind = kind;
  c.R_star = t.front();
  c.horizon = horizon;
  auto [lo, hi] = std::minmax_element(driving.begin(), driving.end());
  c.inf_driving = *lo;
  c.sup_driving = *hi;
  c.growth = assess_growth(t, driving, opts.growth_ratio);

  if (c.growth.unbounded_to_horizon && c.inf_driving > 0.0) {
    c.verdict = Verdict::certified_to_horizon;
    c.bound = 0.25 * c.inf_driving * c.inf_driving;
  } else {
    c.verdict = Verdict::not_certified;
    if (!c.growth.monotone_increasing)
      c.note = "driving function is not nondecreasing on the tail";
    else if (!c.growth.unbounded_to_horizon)
      c.note = "driving function saturates before the horizon";
    else
      c.note = "driving function is not positive on the tail";
  }

  const std::size_t n = t.size();
  const std::size_t k = static_cast<std::size_t>(std::max(2, opts.witness_count));
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i * (n - 1) / (k - 1);
    c.witness_t.push_back(t[j]);
    c.witness_value.push_back(driving[j]);
  }
  return c;
}

}  // namespace tonelab
