#pragma once

// Rotationally symmetric base (N, dt^2 + f(t)^2 dtheta^2) with a pole at t = 0,
// and the warped product M = N x_psi F over it.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tonelab/profiles.hpp"

namespace tonelab {

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ModelCheckOptions {
  double horizon = 50.0;  // positivity is sampled on (0, horizon]
  int samples = 10000;
  double pole_probe = 1e-6;
  double pole_tolerance = 1e-8;
};

class BaseModel {
 public:
  /// Validates n >= 2, f > 0 on the sampled horizon, f(0) = 0 and f'(0) = 1.
  BaseModel(int n, Profile f, std::string pole_label = "p0", const ModelCheckOptions& opts = {});

  int dimension() const { return n_; }
  const Profile& warp() const { return f_; }
  const std::string& pole_label() const { return pole_label_; }

  /// (n-1) log f(t), the log of the radial volume weight of N.
  double log_weight(double t) const;

 private:
  int n_;
  Profile f_;
  std::string pole_label_;
};

class FiberModel {
 public:
  FiberModel(int m, Profile psi, double unit_fiber_volume, std::vector<double> mode_eigenvalues,
             const ModelCheckOptions& opts = {});

  /// Unit circle fibers: m = 1, volume 2 pi, spectrum 0, 1, 1, 4, 4, ...
  static FiberModel circle(Profile psi, int modes = 9, const ModelCheckOptions& opts = {});

  int dimension() const { return m_; }
  const Profile& warp() const { return psi_; }
  double unit_volume() const { return unit_volume_; }
  const std::vector<double>& mode_eigenvalues() const { return modes_; }
  bool is_minimal() const { return psi_.is_constant(); }

  /// m log psi(t).
  double log_weight(double t) const;

 private:
  int m_;
  Profile psi_;
  double unit_volume_;
  std::vector<double> modes_;
};

struct SubmersionModel {
  BaseModel base;
  std::optional<FiberModel> fiber;

  bool has_fiber() const { return fiber.has_value(); }
};

// All radial fields below take t > 0 and throw DomainError otherwise.

/// Laplacian of the distance to the pole: (n-1) f'/f.
double radial_laplacian(const BaseModel& base, double t);
/// -f''/f.
double radial_curvature(const BaseModel& base, double t);
/// Radial coefficient of dpi(H), +m psi'/psi. Throws ModelError without a fiber.
double mean_curvature_radial(const SubmersionModel& model, double t);
/// f^(n-1) psi^m (psi^m = 1 without a fiber). May overflow; prefer the log form.
double volume_density(const SubmersionModel& model, double t);
double log_volume_density(const SubmersionModel& model, double t);
/// unit_fiber_volume * psi(t)^m.
double fiber_volume(const SubmersionModel& model, double t);
double log_fiber_volume(const SubmersionModel& model, double t);
/// Delta rho + <grad rho, dpi H>; the log-derivative of volume_density.
double h_function(const SubmersionModel& model, double t);
/// Delta rho - |H|.
double l_function(const SubmersionModel& model, double t);

/// Volume of the unit sphere S^(d) (d = 1 gives 2 pi).
double unit_sphere_volume(int d);

}  // namespace tonelab
