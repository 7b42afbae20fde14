#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tonelab/models.hpp"

using namespace tonelab;
using doctest::Approx;

namespace {

SubmersionModel base_only(int n, Profile f) { return {BaseModel(n, std::move(f)), std::nullopt}; }

SubmersionModel baider() {
  return {BaseModel(2, presets::baider_base()), FiberModel::circle(presets::baider_fiber())};
}

}  // namespace

TEST_CASE("radial laplacian") {
  CHECK(radial_laplacian(BaseModel(2, presets::euclidean()), 2.0) == Approx(0.5));
  CHECK(radial_laplacian(BaseModel(2, presets::hyperbolic(-1)), 1.0) == Approx(1.3130353).epsilon(1e-7));
  CHECK(radial_laplacian(BaseModel(2, presets::baider_base()), 1.0) == Approx(3.0));
  CHECK(radial_laplacian(BaseModel(4, presets::euclidean()), 3.0) == Approx(1.0));
}

TEST_CASE("radial curvature") {
  CHECK(radial_curvature(BaseModel(2, presets::euclidean()), 1.7) == 0.0);
  for (double t : {0.3, 1.0, 5.0}) CHECK(radial_curvature(BaseModel(2, presets::hyperbolic(-1)), t) == Approx(-1.0));
  const BaseModel b(2, presets::baider_base());
  CHECK(radial_curvature(b, 2.0) == Approx(-22.0));
  double prev = radial_curvature(b, 1.0);
  for (double t = 1.1; t < 10.0; t += 0.1) {
    const double k = radial_curvature(b, t);
    CHECK(k < prev);
    prev = k;
  }
}

TEST_CASE("mean curvature of the fibers") {
  SubmersionModel flat{BaseModel(2, presets::euclidean()), FiberModel::circle(presets::constant(1.0))};
  CHECK(mean_curvature_radial(flat, 1.3) == 0.0);
  CHECK(mean_curvature_radial(baider(), 1.0) == Approx(-1.0));
  SubmersionModel e2{BaseModel(2, presets::euclidean()),
                     FiberModel(2, Profile::parse("exp(t)"), unit_sphere_volume(2), {0.0, 2.0})};
  CHECK(mean_curvature_radial(e2, 0.7) == Approx(2.0));
}

TEST_CASE("volume density") {
  CHECK(volume_density(base_only(3, presets::euclidean()), 2.0) == Approx(4.0));
  CHECK(volume_density(baider(), 1.0) == Approx(std::exp(1.0)).epsilon(1e-12));
  SubmersionModel c{BaseModel(2, presets::hyperbolic(-1)), FiberModel::circle(presets::constant(3.0))};
  CHECK(volume_density(c, 1.0) == Approx(3.0 * std::sinh(1.0)));
  CHECK(log_volume_density(baider(), 50.0) == Approx(std::log(50.0) + 50.0).epsilon(1e-14));
}

TEST_CASE("fiber volume") {
  SubmersionModel one{BaseModel(2, presets::euclidean()), FiberModel::circle(presets::constant(1.0))};
  CHECK(fiber_volume(one, 0.2) == Approx(2 * std::numbers::pi));
  CHECK(fiber_volume(one, 7.0) == Approx(2 * std::numbers::pi));
  CHECK(fiber_volume(baider(), 1.0) == Approx(6.2831853));
  CHECK(fiber_volume(baider(), 2.0) == Approx(2 * std::numbers::pi * std::exp(-2.0)).epsilon(1e-12));
  CHECK(fiber_volume(baider(), 2.0) == Approx(0.8503).epsilon(1e-4));
  CHECK(unit_sphere_volume(1) == Approx(2 * std::numbers::pi));
  CHECK(unit_sphere_volume(2) == Approx(4 * std::numbers::pi));
}

TEST_CASE("h and l functions") {
  CHECK(h_function(base_only(2, presets::euclidean()), 4.0) == Approx(0.25));
  CHECK(h_function(baider(), 2.0) == Approx(1.5));
  SubmersionModel dl{BaseModel(2, presets::baider_base()), FiberModel::circle(presets::constant(1.0))};
  CHECK(h_function(dl, 2.0) == Approx(4.5));
  for (double t : {0.5, 2.0, 6.0}) CHECK(l_function(dl, t) == Approx(radial_laplacian(dl.base, t)));
  CHECK(l_function(baider(), 2.0) == Approx(1.5));
  SubmersionModel hyp{BaseModel(2, presets::hyperbolic(-1)), FiberModel::circle(Profile::parse("exp(t)"))};
  CHECK(l_function(hyp, 1.0) == Approx(0.3130353).epsilon(1e-7));
}

TEST_CASE("log volume derivative splits into base and fiber parts") {
  const auto m = baider();
  for (double t : {0.5, 1.5, 3.0}) {
    const double h = 1e-5;
    const double fd = (log_volume_density(m, t + h) - log_volume_density(m, t - h)) / (2 * h);
    CHECK(fd == Approx(radial_laplacian(m.base, t) + mean_curvature_radial(m, t)).epsilon(1e-8));
  }
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(BaseModel(1, presets::euclidean()), ModelError);
  CHECK_THROWS_AS(BaseModel(2, Profile::parse("1+t")), ModelError);    // f(0) != 0
  CHECK_THROWS_AS(BaseModel(2, Profile::parse("2*t")), ModelError);    // f'(0) != 1
  CHECK_THROWS_AS(BaseModel(2, Profile::parse("sin(t)")), ModelError);  // vanishes at pi
  CHECK_THROWS_AS(FiberModel::circle(Profile::parse("t-1")), ModelError);
  CHECK_NOTHROW(BaseModel(2, presets::baider_base()));
}
