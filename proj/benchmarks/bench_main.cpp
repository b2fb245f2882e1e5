#include <benchmark/benchmark.h>

#include <cmath>

#include "ricci_forge/chart_calculus.hpp"
#include "ricci_forge/core_verifier.hpp"
#include "ricci_forge/neck_builder.hpp"
#include "ricci_forge/submersion_ricci.hpp"
#include "ricci_forge_cli/oracle_harness.hpp"

namespace {

using namespace rf;

const neck::ProfileG1& fixture() {
  static const neck::ProfileG1 g = neck::fixture_g1(4, 0.1, 0.5);
  return g;
}

void BM_ChartCurvature(benchmark::State& state) {
  auto f = profiles::sine_cosine(0.0, 1.5);
  auto h = profiles::cosh_over(2.0, 0.0, 1.5);
  auto c = submersion::hopf_s3_chart(f, h);
  chart::Vec p(4);
  p << 0.6, 1.0, 0.3, 0.2;
  for (auto _ : state) benchmark::DoNotOptimize(chart::riemann_ricci_fd(c, p, 1e-3));
}
BENCHMARK(BM_ChartCurvature);

void BM_OracleCheck(benchmark::State& state) {
  oracle::OracleOptions o;
  o.instances = static_cast<int>(state.range(0));
  o.hopf_points = 2;
  for (auto _ : state) benchmark::DoNotOptimize(oracle::run_oracle(o));
}
BENCHMARK(BM_OracleCheck)->Arg(4)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_CoreGrid(benchmark::State& state) {
  core::CoreSpec s{submersion::Algebra::C, 2, core::HChoice::Cosh, 100.0,
                   static_cast<int>(state.range(0)), 1e-4};
  for (auto _ : state) benchmark::DoNotOptimize(core::verify_core(s));
}
BENCHMARK(BM_CoreGrid)->Arg(2048)->Arg(16384)->Unit(benchmark::kMillisecond);

void BM_NeckGrid(benchmark::State& state) {
  auto prof = neck::prepare_profile(fixture(), 0.4);
  auto p = neck::neck_params(1048576.0, 0.125, 0.125, prof);
  neck::NeckGridOptions o;
  o.nt = static_cast<int>(state.range(0));
  o.nx = 128;
  for (auto _ : state) benchmark::DoNotOptimize(neck::ricci_positivity_report(p, o));
}
BENCHMARK(BM_NeckGrid)->Arg(512)->Arg(3000)->Unit(benchmark::kMillisecond);

void BM_NeckSearch(benchmark::State& state) {
  auto prof = neck::prepare_profile(fixture(), 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(neck::parameter_search(fixture(), prof));
}
BENCHMARK(BM_NeckSearch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
