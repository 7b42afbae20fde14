#pragma once

// Bottom of the essential spectrum from exterior-domain tone sweeps,
// discreteness certificates driven by h or l, the transfer of the base
// estimate to the total space, and the Brooks volume-growth diagnostic.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tonelab/bounds.hpp"
#include "tonelab/certificate.hpp"
#include "tonelab/models.hpp"
#include "tonelab/tone.hpp"

namespace tonelab {

/// Exterior tones lambda*([R, inf)) are approximated by Dirichlet truncations
/// [R, R_cut] with common cuts R_cut_k = max(R) + L0 * 2^k, k = 0, 1, ...
struct EssPolicy {
  double L0 = 8.0;
  int max_cuts = 6;
  double stop_tol = 1e-3;     // relative change between consecutive cuts
  double threshold = 1e3;     // divergence threshold for "discrete"
  int grid = 4096;
  int fiber_mode = 0;
};

struct CutValue {
  double R_cut = 0.0;
  double lambda = 0.0;
  double err = 0.0;  // Richardson estimate of this solve
};

struct EssPoint {
  double R = 0.0;
  std::vector<CutValue> cuts;  // in increasing R_cut
  int converged_at = -1;       // first cut index meeting stop_tol, -1 if none
  double lambda = 0.0;         // value at the common final cut
  double err = 0.0;            // Richardson error plus the last Cauchy residual
  bool above_threshold = false;
};

enum class EssVerdict { bottom, discrete };
std::string_view to_string(EssVerdict v);

struct EssEstimate {
  Space space = Space::base;
  EssPolicy policy;
  std::vector<EssPoint> points;  // in increasing R
  EssVerdict verdict = EssVerdict::bottom;
  std::optional<double> bottom;  // absent when discrete
  double bottom_err = 0.0;
  bool budget_exhausted = false;  // some R never met stop_tol
  bool monotone_in_R = true;
  int eigensolves = 0;
};

/// Throws std::invalid_argument if R_sequence is empty or not increasing.
EssEstimate ess_bottom_estimate(const SubmersionModel& model, Space space, const std::vector<double>& R_sequence,
                                const EssPolicy& policy = {});

enum class DrivingMode { h, l };

/// Certificate from h = Delta rho + <grad rho, dpi H> (mode h) or
/// l = Delta rho - |H| (mode l) sampled on [R*, horizon].
Certificate discreteness_certificate(const SubmersionModel& model, double horizon, DrivingMode mode,
                                     const CertificateOptions& opts = {});

enum class TransferKind { equality, inequality, no_transfer };
std::string_view to_string(TransferKind k);

struct TransferOptions {
  double span = 40.0;  // fiber volumes are sampled on [R_min, R_min + span]
  int samples = 4000;
  double degenerate_ratio = 1e-8;
};

struct TransferReport {
  TransferKind kind = TransferKind::no_transfer;
  bool total_discrete = false;  // set when the base is discrete and the kind is equality
  std::optional<double> value;  // equality: the shared bottom
  std::optional<double> upper;  // inequality: (sup vol / inf vol) * base bottom
  double inf_volume = 0.0;
  double sup_volume = 0.0;
  bool degenerate = false;
  std::string statement;
};

TransferReport submersion_transfer(const EssEstimate& base_estimate, const SubmersionModel& model,
                                   const TransferOptions& opts = {});

struct BrooksOptions {
  int samples = 20000;
  double tail_fraction = 0.1;
  double slope_increment_tol = 0.05;
};

struct BrooksReport {
  Space space = Space::base;
  double r_max = 0.0;
  double angular_constant = 0.0;
  std::vector<double> tail_r;
  std::vector<double> tail_mu_hat;  // log vol(B(r)) / r
  double log_volume_rmax = 0.0;
  double mu_estimate = 0.0;     // slope of log vol over the tail
  double slope_increment = 0.0;  // change of that slope across the tail halves
  bool mu_finite = false;
  bool volume_diverges = false;
  bool nonempty_essential_spectrum = false;
  /// mu^2 / 4, an upper bound for inf sigma_ess when the verdict holds.
  std::optional<double> upper_bound;
  /// Total space only: sup psi^m on [0, r_max], which brackets metric balls.
  std::optional<double> bracket_constant;
  bool truncated = false;  // quadrature hit a non-representable value
  double reached_r = 0.0;
};

BrooksReport brooks_growth(const SubmersionModel& model, Space space, double r_max, const BrooksOptions& opts = {});

/// Brooks diagnostic packaged as a certificate with an upper-bound sense.
Certificate brooks_certificate(const BrooksReport& report);

}  // namespace tonelab
