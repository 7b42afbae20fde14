#include "tonelab/models.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "tonelab/numeric_format.hpp"

namespace tonelab {

namespace {

void require_positive_t(double t) {
  if (!(t > 0.0)) throw DomainError("radial coordinate must be positive", t);
}

// Positivity is decided in log space so that profiles which overflow in
// linear scale (t exp(t^2) at t = 50) are still checked.
void require_positive_on(const Profile& p, double from, double to, int samples, const char* what) {
  for (int i = 0; i <= samples; ++i) {
    double t = from + (to - from) * i / samples;
    if (t <= 0.0 && p.domain() == ProfileDomain::open_at_zero) continue;
    SignedLog v;
    try {
      v = p.log_value(t);
    } catch (const DomainError& e) {
      throw ModelError(std::string(what) + " '" + p.source() + "' is undefined: " + e.what());
    }
    if (v.sign <= 0)
      throw ModelError(std::string(what) + " '" + p.source() + "' is not positive at t=" +
                       format_double(t));
  }
}

}  // namespace

BaseModel::BaseModel(int n, Profile f, std::string pole_label, const ModelCheckOptions& opts)
    : n_(n), f_(std::move(f)), pole_label_(std::move(pole_label)) {
  if (n_ < 2) throw ModelError("base dimension must be at least 2");
  double first = opts.horizon / opts.samples;
  require_positive_on(f_, first, opts.horizon, opts.samples - 1, "base warp");
  // Evaluate at the pole itself; expressions singular there (but with a
  // removable singularity) are probed just outside, with f(0) extrapolated.
  double at = 0.0;
  double f0 = 0.0;
  double df0 = 0.0;
  try {
    f0 = f_.value(0.0);
    df0 = f_.d1(0.0);
  } catch (const DomainError&) {
    at = opts.pole_probe;
    try {
      df0 = f_.d1(at);
      f0 = f_.value(at) - at * df0;
    } catch (const DomainError& e) {
      throw ModelError("base warp '" + f_.source() + "' is not smooth at the pole: " + e.what());
    }
  }
  if (std::fabs(f0) > opts.pole_tolerance || std::fabs(df0 - 1.0) > opts.pole_tolerance) {
    throw ModelError("base warp '" + f_.source() + "' needs f(0) = 0 and f'(0) = 1, got f=" +
                     format_double(f0) + ", f'=" + format_double(df0) + " at t=" + format_double(at));
  }
}

double BaseModel::log_weight(double t) const {
  auto v = f_.log_value(t);
  if (v.sign == 0) return -std::numeric_limits<double>::infinity();
  if (v.sign < 0) throw DomainError("negative base warp", t);
  return (n_ - 1) * v.log_abs;
}

FiberModel::FiberModel(int m, Profile psi, double unit_fiber_volume,
                       std::vector<double> mode_eigenvalues, const ModelCheckOptions& opts)
    : m_(m), psi_(std::move(psi)), unit_volume_(unit_fiber_volume), modes_(std::move(mode_eigenvalues)) {
  if (m_ < 1) throw ModelError("fiber dimension must be at least 1");
  if (!(unit_volume_ > 0.0) || !std::isfinite(unit_volume_))
    throw ModelError("unit fiber volume must be positive");
  if (modes_.empty() || modes_.front() != 0.0)
    throw ModelError("fiber mode eigenvalues must start at 0");
  for (std::size_t i = 1; i < modes_.size(); ++i)
    if (modes_[i] < modes_[i - 1]) throw ModelError("fiber mode eigenvalues must be nondecreasing");
  require_positive_on(psi_, 0.0, opts.horizon, opts.samples, "fiber warp");
}

FiberModel FiberModel::circle(Profile psi, int modes, const ModelCheckOptions& opts) {
  std::vector<double> spectrum{0.0};
  for (int k = 1; static_cast<int>(spectrum.size()) < modes; ++k) {
    spectrum.push_back(double(k) * k);
    spectrum.push_back(double(k) * k);
  }
  spectrum.resize(static_cast<std::size_t>(std::max(modes, 1)));
  return FiberModel(1, std::move(psi), 2.0 * std::numbers::pi, std::move(spectrum), opts);
}

double FiberModel::log_weight(double t) const {
  auto v = psi_.log_value(t);
  if (v.sign <= 0) throw DomainError("fiber warp is not positive", t);
  return m_ * v.log_abs;
}

double radial_laplacian(const BaseModel& base, double t) {
  require_positive_t(t);
  return (base.dimension() - 1) * base.warp().log_derivative(t);
}

double radial_curvature(const BaseModel& base, double t) {
  require_positive_t(t);
  return -base.warp().second_ratio(t);
}

namespace {

const FiberModel& require_fiber(const SubmersionModel& model) {
  if (!model.fiber) throw ModelError("operation needs a fiber");
  return *model.fiber;
}

}  // namespace

double mean_curvature_radial(const SubmersionModel& model, double t) {
  const auto& fiber = require_fiber(model);
  require_positive_t(t);
  return fiber.dimension() * fiber.warp().log_derivative(t);
}

double log_volume_density(const SubmersionModel& model, double t) {
  require_positive_t(t);
  double lw = model.base.log_weight(t);
  if (model.fiber) lw += model.fiber->log_weight(t);
  return lw;
}

double volume_density(const SubmersionModel& model, double t) {
  double w = std::exp(log_volume_density(model, t));
  if (!std::isfinite(w)) throw DomainError("volume density overflows", t);
  return w;
}

double log_fiber_volume(const SubmersionModel& model, double t) {
  const auto& fiber = require_fiber(model);
  if (t < 0.0) throw DomainError("radial coordinate must be nonnegative", t);
  return std::log(fiber.unit_volume()) + fiber.log_weight(t);
}

double fiber_volume(const SubmersionModel& model, double t) {
  return std::exp(log_fiber_volume(model, t));
}

double h_function(const SubmersionModel& model, double t) {
  double h = radial_laplacian(model.base, t);
  if (model.fiber) h += mean_curvature_radial(model, t);
  return h;
}

double l_function(const SubmersionModel& model, double t) {
  double l = radial_laplacian(model.base, t);
  if (model.fiber) l -= std::fabs(mean_curvature_radial(model, t));
  return l;
}

double unit_sphere_volume(int d) {
  double k = d + 1;
  return 2.0 * std::pow(std::numbers::pi, k / 2.0) / std::tgamma(k / 2.0);
}

}  // namespace tonelab
