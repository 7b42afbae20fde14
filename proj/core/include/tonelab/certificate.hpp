#pragma once

// Verdict objects for discreteness claims. A finite computation can only see
// up to a horizon, so every certificate records the horizon and the tail
// samples it was decided on.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tonelab/sampling.hpp"

namespace tonelab {

enum class CertificateKind { h_proper, l_proper, radial_curvature, brooks };
enum class Verdict { certified_to_horizon, not_certified, hypothesis_failed };
/// Whether `bound` bounds inf sigma_ess from below or from above.
enum class BoundSense { lower, upper };

std::string_view to_string(CertificateKind k);
std::string_view to_string(Verdict v);
std::string_view to_string(BoundSense s);
CertificateKind parse_certificate_kind(std::string_view s);
Verdict parse_verdict(std::string_view s);
BoundSense parse_bound_sense(std::string_view s);

struct Certificate {
  CertificateKind kind = CertificateKind::h_proper;
  Verdict verdict = Verdict::not_certified;
  /// Present exactly when verdict is certified_to_horizon.
  std::optional<double> bound;
  BoundSense sense = BoundSense::lower;
  double R_star = 0.0;
  double horizon = 0.0;
  double inf_driving = 0.0;
  double sup_driving = 0.0;
  GrowthAssessment growth;
  std::vector<double> witness_t;
  std::vector<double> witness_value;
  std::string note;
};

struct CertificateOptions {
  /// Start of the tested tail; defaults to half the horizon.
  std::optional<double> R_star;
  int samples = 2000;
  double growth_ratio = 0.6;
  /// Number of tail samples copied into the certificate.
  int witness_count = 21;
};

/// Decides a certificate from samples of the driving function on [R*, T]:
/// certified when the samples are positive and grow without bound to the
/// horizon, with bound (1/4)(inf driving)^2.
Certificate decide_certificate(CertificateKind kind, std::vector<double> t, std::vector<double> driving,
                               double horizon, const CertificateOptions& opts);

}  // namespace tonelab
