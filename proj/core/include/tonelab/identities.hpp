#pragma once

// Pointwise checks of the submersion calculus in the radial reduction:
// the divergence lift, the Laplacian lift and the derivative of fiber
// averages. Derivatives of products are symbolic, so a residual measures
// a formula error rather than discretization.

#include <string>

#include "tonelab/models.hpp"

namespace tonelab {

struct IdentityOptions {
  double from = 0.1;  // sampled on [from, to]; the pole is excluded
  double to = 5.0;
  int samples = 500;
  double tolerance = 1e-7;
  /// +1 uses <grad rho, dpi H> = +m psi'/psi; -1 flips it.
  int sign = +1;
  /// Random points for the finite-difference cross-check (0 disables it).
  int fd_points = 20;
};

struct ResidualReport {
  std::string check;
  double max_residual = 0.0;
  double argmax_t = 0.0;
  int samples = 0;
  double tolerance = 0.0;
  bool pass = false;  // max_residual < tolerance
  /// Largest relative gap between the symbolic left side and a central
  /// difference of the same quantity at fixed pseudo-random points.
  double fd_discrepancy = 0.0;
};

/// |(w a)'/w - [(f^(n-1) a)'/f^(n-1) + sign a H]| with w = f^(n-1) psi^m.
ResidualReport check_divergence_identity(const SubmersionModel& model, const Profile& a,
                                         const IdentityOptions& opts = {});

/// |(w phi')'/w - [(f^(n-1) phi')'/f^(n-1) + sign phi' H]|.
ResidualReport check_laplacian_lift(const SubmersionModel& model, const Profile& phi,
                                    const IdentityOptions& opts = {});

/// |d/dt[V phi] - V (phi' + sign phi H)| / V with V = vol(fiber at t).
/// Residuals are relative to V so that tiny or huge fibers compare alike.
ResidualReport check_grad_average(const SubmersionModel& model, const Profile& phi,
                                  const IdentityOptions& opts = {});

struct SignResolution {
  int sign = +1;
  bool degenerate = false;  // both signs pass (psi constant on the range)
  bool separated = false;   // rejected residual exceeds 10x tolerance
  ResidualReport plus;
  ResidualReport minus;
};

/// Runs the divergence identity with a = 1 under both signs.
SignResolution resolve_sign_convention(const SubmersionModel& model, const IdentityOptions& opts = {});

}  // namespace tonelab
