#pragma once

// The Jacobi-type Cauchy problem J'' = G J, J(0) = 0, J'(0) = 1, its
// logarithmic derivative ell = (n-1) J'/J, and the Laplacian comparison
// Delta rho >= ell under the radial curvature bound -f''/f <= -G.

#include <stdexcept>
#include <vector>

#include "tonelab/certificate.hpp"
#include "tonelab/models.hpp"

namespace tonelab {

/// J reached zero at location() inside the requested window.
class ConjugatePointError : public std::runtime_error {
 public:
  explicit ConjugatePointError(double t);
  double location() const noexcept { return t_; }

 private:
  double t_;
};

class JacobiSolution {
 public:
  const Profile& coefficient() const { return G_; }
  double step() const { return step_; }
  double horizon() const { return t_.back(); }
  int dimension() const { return n_; }
  const std::vector<double>& nodes() const { return t_; }

  /// J and J' at t in [0, T] by cubic Hermite interpolation (J'' = G J is
  /// used for the derivative's slopes). May overflow for fast growth.
  double value(double t) const;
  double derivative(double t) const;
  /// log J(t), finite even when J itself is not representable.
  double log_value(double t) const;
  /// J'(t)/J(t); the interpolants share one scale, so no overflow.
  double log_derivative(double t) const;

 private:
  friend JacobiSolution solve_jacobi(const Profile& G, double T, double step, int n);
  struct Local {
    double J, dJ, scale;
  };
  Local at(double t) const;

  Profile G_ = presets::constant(0.0);
  double step_ = 0.0;
  int n_ = 2;
  std::vector<double> t_;
  // J = j_ * exp(scale_) per node; scale_ grows as the solution is rescaled.
  std::vector<double> j_, dj_, scale_;
};

/// Classical RK4 on (J, J') with uniform steps; the last step lands on T.
/// Throws ConjugatePointError if J <= 0 somewhere in (0, T].
JacobiSolution solve_jacobi(const Profile& G, double T, double step = 1e-3, int n = 2);

/// (n-1) J'(t)/J(t) for 0 < t <= T.
double ell(const JacobiSolution& sol, double t);

struct ComparisonOptions {
  double step = 1e-3;
  int samples = 2000;
  double tolerance = 1e-6;
  /// Relative slack when sampling the hypothesis -f''/f <= -G.
  double hypothesis_slack = 1e-9;
};

struct ComparisonReport {
  bool hypothesis_met = false;
  double hypothesis_max_violation = 0.0;  // max of (-f''/f + G), positive part
  double hypothesis_argmax = 0.0;
  double max_violation = 0.0;  // max of (ell - Delta rho), positive part
  double argmax_t = 0.0;
  double max_abs_difference = 0.0;  // max |Delta rho - ell|
  int samples = 0;
  double tolerance = 0.0;
  bool pass = false;  // max_violation < tolerance
};

/// Samples (0, T] and checks Delta rho >= ell - tolerance. A failed
/// hypothesis is reported, not thrown.
ComparisonReport comparison_check(const BaseModel& base, const Profile& G, double T,
                                  const ComparisonOptions& opts = {});

/// Drives a discreteness certificate on c(t) = ell(t) + <grad rho, dpi H> over
/// [R*, T]. A failed curvature hypothesis gives the hypothesis_failed verdict.
Certificate radial_discreteness_certificate(const SubmersionModel& model, const Profile& G, double T,
                                            const CertificateOptions& opts = {},
                                            const ComparisonOptions& cmp = {});

}  // namespace tonelab
