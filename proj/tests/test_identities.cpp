#include <doctest.h>

#include <cmath>

#include "support/random_profiles.hpp"
#include "tonelab/identities.hpp"

using namespace tonelab;

namespace {

SubmersionModel baider() {
  return {BaseModel(2, presets::baider_base()), FiberModel::circle(presets::baider_fiber())};
}

SubmersionModel minimal() {
  return {BaseModel(2, presets::hyperbolic(-1)), FiberModel::circle(presets::constant(1.0))};
}

}  // namespace

TEST_CASE("divergence identity") {
  CHECK(check_divergence_identity(minimal(), Profile::parse("t^2")).max_residual <= 1e-12);
  const auto r = check_divergence_identity(baider(), presets::constant(1.0));
  CHECK(r.pass);
  CHECK(r.max_residual < 1e-8);
  CHECK(r.fd_discrepancy < 1e-6);

  IdentityOptions flipped;
  flipped.sign = -1;
  const auto f = check_divergence_identity(baider(), presets::constant(1.0), flipped);
  CHECK_FALSE(f.pass);
  // 2 |psi'/psi| a = 2 |1 - 2t| peaks at the right end of [0.1, 5].
  CHECK(f.max_residual == doctest::Approx(18.0).epsilon(1e-9));
}

TEST_CASE("Laplacian lift") {
  const auto r = check_laplacian_lift(baider(), Profile::parse("t"));
  CHECK(r.pass);
  CHECK(r.max_residual < 1e-8);
  CHECK(check_laplacian_lift(minimal(), Profile::parse("sin(t)*t")).max_residual <= 1e-12);
  testing::Engine rng(19);
  for (int i = 0; i < 5; ++i) CHECK(check_laplacian_lift(baider(), Profile::parse(testing::random_polynomial(rng))).pass);
}

TEST_CASE("fiber average derivative") {
  CHECK(check_grad_average(baider(), presets::constant(1.0)).max_residual < 1e-10);
  SubmersionModel c{BaseModel(2, presets::euclidean()), FiberModel::circle(presets::constant(3.0))};
  CHECK(check_grad_average(c, Profile::parse("t^3")).max_residual <= 1e-12);
  const auto r = check_grad_average(baider(), Profile::parse("sinh(t)"));
  CHECK(r.pass);
  CHECK(r.max_residual < 1e-7);
}

TEST_CASE("sign convention") {
  const auto b = resolve_sign_convention(baider());
  CHECK(b.sign == 1);
  CHECK_FALSE(b.degenerate);
  CHECK(b.separated);
  CHECK(b.minus.max_residual > 10 * b.plus.tolerance);

  const auto m = resolve_sign_convention(minimal());
  CHECK(m.sign == 1);
  CHECK(m.degenerate);

  SubmersionModel e3{BaseModel(2, presets::euclidean()),
                     FiberModel(3, Profile::parse("exp(t)"), unit_sphere_volume(3), {0.0})};
  const auto s = resolve_sign_convention(e3);
  CHECK(s.sign == 1);
  CHECK(s.separated);
}

TEST_CASE("random triples") {
  testing::Engine rng(2024);
  int failures = 0;
  for (int i = 0; i < 50; ++i) {
    const int m = testing::uniform_int(rng, 1, 3);
    SubmersionModel model{BaseModel(testing::uniform_int(rng, 2, 4), Profile::parse(testing::random_warp(rng))),
                          FiberModel(m, Profile::parse(testing::random_fiber(rng)), unit_sphere_volume(m), {0.0})};
    const Profile a = Profile::parse(testing::random_polynomial(rng));
    const Profile phi = Profile::parse(testing::random_polynomial(rng));
    IdentityOptions o;
    o.to = 3.0;
    failures += !check_divergence_identity(model, a, o).pass;
    failures += !check_laplacian_lift(model, phi, o).pass;
    failures += !check_grad_average(model, phi, o).pass;
  }
  CHECK(failures == 0);
}
