#include <doctest.h>

#include <cmath>

#include "tonelab/spectrum.hpp"

using namespace tonelab;
using doctest::Approx;

namespace {

SubmersionModel base_only(Profile f) { return {BaseModel(2, std::move(f)), std::nullopt}; }

SubmersionModel baider() {
  return {BaseModel(2, presets::baider_base()), FiberModel::circle(presets::baider_fiber())};
}

}  // namespace

TEST_CASE("essential bottom of classical planes") {
  const auto e = ess_bottom_estimate(base_only(presets::euclidean()), Space::base, {1, 2, 4, 8});
  REQUIRE(e.bottom);
  CHECK(std::abs(*e.bottom) < 1e-3);

  const auto h = ess_bottom_estimate(base_only(presets::hyperbolic(-1)), Space::base, {1, 2, 4, 8});
  REQUIRE(h.bottom);
  CHECK(*h.bottom == Approx(0.25).epsilon(0.01));
  CHECK(h.verdict == EssVerdict::bottom);
  CHECK(h.eigensolves <= 80);
  for (const auto& p : h.points)
    for (std::size_t k = 1; k < p.cuts.size(); ++k) CHECK(p.cuts[k].lambda <= p.cuts[k - 1].lambda + 1e-9);
}

TEST_CASE("discrete base") {
  // Exterior tones of t exp(t^2) grow like R^2 (Liouville potential t^2 + 2).
  EssPolicy pol;
  pol.threshold = 50.0;
  const auto e = ess_bottom_estimate(base_only(presets::baider_base()), Space::base, {1, 2, 4, 8}, pol);
  CHECK(e.verdict == EssVerdict::discrete);
  CHECK_FALSE(e.bottom.has_value());
  for (const auto& p : e.points) CHECK(p.lambda >= p.R * p.R + 2.0);
  CHECK(e.monotone_in_R);
}

TEST_CASE("sweep input validation") {
  CHECK_THROWS_AS(ess_bottom_estimate(base_only(presets::euclidean()), Space::base, {}), std::invalid_argument);
  CHECK_THROWS_AS(ess_bottom_estimate(base_only(presets::euclidean()), Space::base, {2, 1}), std::invalid_argument);
}

TEST_CASE("h and l certificates") {
  CertificateOptions co;
  co.R_star = 2.0;
  SubmersionModel dl{BaseModel(2, presets::baider_base()), FiberModel::circle(presets::constant(1.0))};
  const auto c = discreteness_certificate(dl, 20.0, DrivingMode::h, co);
  CHECK(c.verdict == Verdict::certified_to_horizon);
  CHECK(*c.bound == Approx(5.0625).epsilon(1e-9));
  CHECK(c.sense == BoundSense::lower);

  const auto b = discreteness_certificate(baider(), 20.0, DrivingMode::h, co);
  CHECK(b.verdict == Verdict::not_certified);
  CHECK(b.sup_driving <= 1.6);
  CHECK_FALSE(b.bound.has_value());

  CHECK(discreteness_certificate(base_only(presets::euclidean()), 20.0, DrivingMode::h, co).verdict ==
        Verdict::not_certified);
  CHECK(discreteness_certificate(dl, 20.0, DrivingMode::l, co).verdict == Verdict::certified_to_horizon);
}

TEST_CASE("transfer from base to total space") {
  const BaseModel h(2, presets::hyperbolic(-1));
  SubmersionModel sl2r{h, FiberModel::circle(presets::constant(2.0))};
  const auto est = ess_bottom_estimate(sl2r, Space::base, {1, 2, 4, 8});
  const auto t = submersion_transfer(est, sl2r);
  CHECK(t.kind == TransferKind::equality);
  CHECK(*t.value == Approx(0.25).epsilon(0.01));

  const auto b = baider();
  const auto be = ess_bottom_estimate(b, Space::base, {2, 4});
  const auto tb = submersion_transfer(be, b);
  CHECK(tb.kind == TransferKind::inequality);
  CHECK(tb.degenerate);

  SubmersionModel dl{BaseModel(2, presets::baider_base()), FiberModel::circle(presets::constant(1.0))};
  EssPolicy low;
  low.threshold = 10.0;
  const auto td = submersion_transfer(ess_bottom_estimate(dl, Space::base, {1, 2, 4}, low), dl);
  CHECK(td.kind == TransferKind::equality);
  CHECK(td.total_discrete);
}

TEST_CASE("Brooks growth") {
  const auto b = brooks_growth(baider(), Space::total, 30.0);
  CHECK(b.mu_estimate == Approx(1.0).epsilon(0.05));
  CHECK(b.volume_diverges);
  CHECK(b.nonempty_essential_spectrum);
  REQUIRE(b.upper_bound);
  CHECK(brooks_certificate(b).sense == BoundSense::upper);
  CHECK(brooks_certificate(b).verdict == Verdict::certified_to_horizon);

  const auto h = brooks_growth(base_only(presets::hyperbolic(-1)), Space::base, 30.0);
  CHECK(h.mu_estimate == Approx(1.0).epsilon(0.05));

  const auto e = brooks_growth(base_only(presets::euclidean()), Space::base, 30.0);
  CHECK(e.mu_estimate < 0.1);

  const auto d = brooks_growth(base_only(presets::baider_base()), Space::base, 30.0);
  CHECK_FALSE(d.mu_finite);
  CHECK_FALSE(d.nonempty_essential_spectrum);
}

TEST_CASE("certificate strings") {
  CHECK(to_string(Verdict::certified_to_horizon) == "certified-to-horizon");
  CHECK(to_string(Verdict::not_certified) == "not-certified");
  CHECK(to_string(Verdict::hypothesis_failed) == "hypothesis-failed");
  for (auto v : {Verdict::certified_to_horizon, Verdict::not_certified, Verdict::hypothesis_failed})
    CHECK(parse_verdict(to_string(v)) == v);
  for (auto k : {CertificateKind::h_proper, CertificateKind::l_proper, CertificateKind::radial_curvature,
                 CertificateKind::brooks})
    CHECK(parse_certificate_kind(to_string(k)) == k);
  CHECK(to_string(TransferKind::no_transfer) == "no-transfer");
}

TEST_CASE("growth assessment") {
  std::vector<double> t, lin, sat;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(1.0 + i * 0.1);
    lin.push_back(t.back());
    sat.push_back(1.0 - 1.0 / t.back());
  }
  CHECK(assess_growth(t, lin).unbounded_to_horizon);
  CHECK_FALSE(assess_growth(t, sat).unbounded_to_horizon);
  const auto inf = infimum(t, sat, false);
  CHECK(inf.value == Approx(0.0));
  CHECK(supremum(t, sat, true).value == Approx(1.0).epsilon(1e-3));
}
