#include <benchmark/benchmark.h>

#include "kobvis/experiments.hpp"

using namespace kobvis;

namespace {

const DomainOracle& exp_domain() {
  static const DomainOracle dom(ProfileFunction::exp_power(1, 1));
  return dom;
}

const DomainOracle& mollified_domain() {
  static const DomainOracle dom(mollify(build_piecewise_max(ProfileFunction::exp_power(0.5L, 1))));
  return dom;
}

void BM_ProfileEvalMollified(benchmark::State& state) {
  const auto& p = mollified_domain().profile();
  Real x = 0.01L;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p(x));
    x = x * 0.999L + 1e-5L;
  }
}
BENCHMARK(BM_ProfileEvalMollified);

void BM_DirectionalRealPhase(benchmark::State& state) {
  const CPoint z{0.05L, 0.3L, 0.2L, 0};
  const CVector v = CVector{1, 0, 0.5L, 0}.normalized();
  for (auto _ : state) benchmark::DoNotOptimize(exp_domain().directional_distance(z, v));
}
BENCHMARK(BM_DirectionalRealPhase);

void BM_DirectionalGeneric(benchmark::State& state) {
  const CPoint z{0.05L, 0.3L, 0.2L, 0.1L};
  const CVector v = CVector{0.6L, 0.3L, 0.2L, -0.7L}.normalized();
  for (auto _ : state) benchmark::DoNotOptimize(exp_domain().directional_distance(z, v));
}
BENCHMARK(BM_DirectionalGeneric)->Unit(benchmark::kMicrosecond);

void BM_BoundaryDistance(benchmark::State& state) {
  const CPoint z{0.3L, 0, 0.2L, 0};
  for (auto _ : state) benchmark::DoNotOptimize(exp_domain().boundary_distance(z));
}
BENCHMARK(BM_BoundaryDistance)->Unit(benchmark::kMicrosecond);

void BM_TangentialCurve(benchmark::State& state) {
  const Real f0 = std::pow(Real(10), -state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(construct_tangential_geodesic(exp_domain(), 1, f0));
}
BENCHMARK(BM_TangentialCurve)->Arg(3)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_Certify(benchmark::State& state) {
  const auto curve = construct_tangential_geodesic(exp_domain(), 1, 1e-6L);
  for (auto _ : state) benchmark::DoNotOptimize(certify_lambda_geodesic(exp_domain(), curve, 4.2L, 0, 16));
}
BENCHMARK(BM_Certify)->Unit(benchmark::kMillisecond);

void BM_HalfPlaneGrid(benchmark::State& state) {
  GridSpec g;
  g.h = 0.05L;
  g.y_max = 8;
  g.y_min = 8 * std::exp(Real(-12));
  g.s_min = -3;
  g.s_max = 3;
  const DistanceGrid grid(std::make_shared<HalfPlaneSlice>(), g);
  for (auto _ : state) benchmark::DoNotOptimize(grid.distance(SlicePoint{-1, 2}, SlicePoint{1, 1e-3L}));
}
BENCHMARK(BM_HalfPlaneGrid)->Unit(benchmark::kMillisecond);

void BM_ModelGridBuild(benchmark::State& state) {
  GridSpec g;
  g.h = 0.1L;
  g.y_min = 1e-6L;
  g.y_max = 0.8L;
  g.s_min = -0.5L;
  g.s_max = 1.5L;
  for (auto _ : state) DistanceGrid grid(std::make_shared<ModelSlice>(exp_domain()), g);
}
BENCHMARK(BM_ModelGridBuild)->Unit(benchmark::kMillisecond);

void BM_IntegralVerdict(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(improper_integral_verdict(
        [](Real x) {
          const Real l = std::log(1 / x);
          return 1 / (x * l * l);
        },
        1e-2L));
}
BENCHMARK(BM_IntegralVerdict)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
