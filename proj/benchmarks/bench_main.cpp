#include <benchmark/benchmark.h>

#include "tonelab/profiles.hpp"
#include "tonelab/spectrum.hpp"
#include "tonelab/tone.hpp"

using namespace tonelab;

static void BM_SmallestEigenpair(benchmark::State& state) {
  const BaseModel h(2, presets::hyperbolic(-1));
  const auto sys = assemble(base_problem(h), Grid(RadialDomain::ball(8.0), static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(smallest_eigenpair(sys).lambda);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SmallestEigenpair)->RangeMultiplier(2)->Range(512, 8192)->Complexity();

static void BM_FundamentalTone(benchmark::State& state) {
  const BaseModel h(2, presets::hyperbolic(-1));
  for (auto _ : state) benchmark::DoNotOptimize(fundamental_tone(h, RadialDomain::ball(16.0)).lambda);
}
BENCHMARK(BM_FundamentalTone)->Unit(benchmark::kMillisecond);

static void BM_ParseDifferentiate(benchmark::State& state) {
  for (auto _ : state) {
    const Expr e = parse_expr("t*exp(t^2)*sinh(2*t)/(1+t^2) - log(1+cosh(t))");
    benchmark::DoNotOptimize(differentiate(differentiate(e)));
  }
}
BENCHMARK(BM_ParseDifferentiate);

static void BM_EvalLog(benchmark::State& state) {
  const Expr e = differentiate(parse_expr("t*exp(t^2)"));
  double t = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_log(e, t));
    t = t < 30.0 ? t + 0.01 : 1.0;
  }
}
BENCHMARK(BM_EvalLog);

static void BM_EssSweepHyperbolic(benchmark::State& state) {
  const SubmersionModel m{BaseModel(2, presets::hyperbolic(-1)), std::nullopt};
  for (auto _ : state) benchmark::DoNotOptimize(ess_bottom_estimate(m, Space::base, {1, 2, 4, 8}).bottom);
}
BENCHMARK(BM_EssSweepHyperbolic)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
