#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "tonelab/tone.hpp"

using namespace tonelab;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double j01_squared = 2.404825557695773 * 2.404825557695773;

}  // namespace

TEST_CASE("unit disk and flat interval") {
  const auto disk = fundamental_tone(BaseModel(2, presets::euclidean()), RadialDomain::ball(1.0));
  CHECK(disk.lambda == Approx(j01_squared).epsilon(1e-6));
  CHECK(disk.error_estimate < 1e-4);
  CHECK(disk.grids.first == 4096);
  CHECK(disk.grids.second == 8192);
  const auto flat = solve_tone(RadialProblem{}, RadialDomain::annulus(0.0, pi));
  CHECK(flat.lambda == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("second-order convergence on smooth weights") {
  const BaseModel h(2, presets::hyperbolic(-1));
  const auto prob = base_problem(h);
  const RadialDomain dom = RadialDomain::annulus(1.0, 3.0);
  auto lam = [&](int n) { return smallest_eigenpair(assemble(prob, Grid(dom, n))).lambda; };
  const double l1 = lam(256), l2 = lam(512), l3 = lam(1024);
  const double ratio = (l1 - l2) / (l2 - l3);
  CHECK(ratio == Approx(4.0).epsilon(0.2));
  const auto disk = BaseModel(2, presets::euclidean());
  auto lamd = [&](int n) {
    return smallest_eigenpair(assemble(base_problem(disk), Grid(RadialDomain::ball(1.0), n))).lambda;
  };
  const double d1 = lamd(256), d2 = lamd(512), d3 = lamd(1024);
  CHECK((d1 - d2) / (d2 - d3) == Approx(4.0).epsilon(0.2));
}

TEST_CASE("hyperbolic ball tones decrease toward one quarter") {
  const BaseModel h(2, presets::hyperbolic(-1));
  double prev = 1e9;
  for (double R : {2.0, 4.0, 8.0, 16.0}) {
    const double l = fundamental_tone(h, RadialDomain::ball(R)).lambda;
    CHECK(l > 0.25);
    CHECK(l < prev);
    prev = l;
  }
  // The gap to 1/4 closes like pi^2 / R^2 for large balls.
  const double l16 = fundamental_tone(h, RadialDomain::ball(16.0)).lambda;
  const double l32 = fundamental_tone(h, RadialDomain::ball(32.0)).lambda;
  CHECK((l16 - 0.25) / (l32 - 0.25) == Approx(4.0).epsilon(0.25));
}

TEST_CASE("minimal fibers do not change the tone") {
  const BaseModel h(2, presets::hyperbolic(-1));
  for (double c : {0.5, 2.0, 30.0}) {
    SubmersionModel m{h, FiberModel::circle(presets::constant(c))};
    for (const auto& dom : {RadialDomain::ball(3.0), RadialDomain::annulus(0.5, 4.0)}) {
      const double base = fundamental_tone(h, dom).lambda;
      const double total = total_space_tone(m, dom).lambda;
      CHECK(std::abs(base - total) <= 1e-10);
    }
  }
}

TEST_CASE("baider total space on [2, 12]") {
  SubmersionModel m{BaseModel(2, presets::baider_base()), FiberModel::circle(presets::baider_fiber())};
  const auto r = total_space_tone(m, RadialDomain::annulus(2.0, 12.0));
  // Independent oracle: the Liouville form -v'' + q v with
  // q = (1/(2t) + 1/2)^2 - 1/(2t^2), solved densely.
  const int n = 1200;
  const double h = 10.0 / (n + 1);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 + (i + 1) * h;
    const double q = std::pow(0.5 / t + 0.5, 2) - 0.5 / (t * t);
    A(i, i) = 2.0 / (h * h) + q;
    if (i + 1 < n) A(i, i + 1) = A(i + 1, i) = -1.0 / (h * h);
  }
  const double dense = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A).eigenvalues()(0);
  CHECK(r.lambda == Approx(dense).epsilon(1e-4));
  CHECK(r.lambda > 0.25);
  const auto r1 = total_space_tone(m, RadialDomain::annulus(2.0, 12.0), 1);
  CHECK(r1.lambda >= r.lambda);
  ToneOptions opts;
  opts.check_modes = true;
  const auto rc = total_space_tone(m, RadialDomain::annulus(2.0, 6.0), 0, opts);
  REQUIRE(rc.mode_check_passed.has_value());
  CHECK(*rc.mode_check_passed);
}

TEST_CASE("Rayleigh quotient") {
  const Grid g(RadialDomain::annulus(0.0, pi), 4095);
  const auto sys = assemble(RadialProblem{}, g);
  const auto ep = smallest_eigenpair(sys);
  CHECK(rayleigh_quotient(RadialProblem{}, g, ep.u) == Approx(ep.lambda).epsilon(1e-8));
  std::vector<double> hat(static_cast<std::size_t>(g.size()));
  for (int i = 0; i < g.size(); ++i) {
    const double t = g.node(i);
    hat[static_cast<std::size_t>(i)] = t <= pi / 2 ? t : pi - t;
  }
  const double q = rayleigh_quotient(RadialProblem{}, g, hat);
  CHECK(q == Approx(12.0 / (pi * pi)).epsilon(1e-5));
  CHECK(q >= ep.lambda);
  std::vector<double> zero(hat.size(), 0.0);
  CHECK_THROWS_AS(rayleigh_quotient(RadialProblem{}, g, zero), std::invalid_argument);
}

TEST_CASE("invalid requests") {
  const BaseModel h(2, presets::hyperbolic(-1));
  SubmersionModel m{h, FiberModel::circle(presets::constant(1.0))};
  CHECK_THROWS(total_space_tone(m, RadialDomain::ball(1.0), 1000));
  CHECK_THROWS(total_space_tone(SubmersionModel{h, std::nullopt}, RadialDomain::ball(1.0)));
  CHECK_THROWS(fundamental_tone(h, RadialDomain::exterior(1.0)));
}
