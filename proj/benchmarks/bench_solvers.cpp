#include "sodw/analysis.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

namespace {

using namespace sodw;

constexpr double pi = std::numbers::pi;

void BM_EigenSync(benchmark::State& state) {
  const SOCoupling gamma(0.5);
  double beta = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eigen_sync(beta, gamma));
    beta += 1e-9;
  }
}
BENCHMARK(BM_EigenSync);

void BM_SyncSolutionSetup(benchmark::State& state) {
  const SyncSech2 p{0.5, pi / 2, 1.0};
  const SOCoupling gamma(0.5);
  for (auto _ : state) {
    SyncSolution sol(p, gamma, AmplitudeVector::basis(3), 0.0);
    benchmark::DoNotOptimize(sol);
  }
}
BENCHMARK(BM_SyncSolutionSetup);

void BM_SyncEvaluate(benchmark::State& state) {
  const SyncSolution sol({0.5, pi / 2, 1.0}, SOCoupling(0.5), AmplitudeVector::basis(3), 0.0);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sol.at(t));
    t = t > 25.0 ? 0.0 : t + 0.01;
  }
}
BENCHMARK(BM_SyncEvaluate);

void BM_AsyncFlipEvaluate(benchmark::State& state) {
  const AsyncTanhSech p{std::sqrt(0.21), 0.5, 0.4};
  const AsyncSolution sol(p, SOCoupling(0.5), AmplitudeVector::basis(1), -62.5);
  double t = -62.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sol.at(t));
    t = t > 62.5 ? -62.5 : t + 0.01;
  }
}
BENCHMARK(BM_AsyncFlipEvaluate);

// Full oracle trajectory over [-T, T] at the default tolerances.
void BM_OracleTrajectory(benchmark::State& state) {
  const ModulationProtocol p = SyncSech2{0.5, pi / 2, 1.0};
  const SOCoupling gamma(0.5);
  const auto grid = uniform_grid(-25.0, 25.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        oracle_trajectory(gamma, p, {AmplitudeVector::basis(3), -25.0}, 25.0, grid));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OracleTrajectory)->Arg(201)->Arg(2001)->Unit(benchmark::kMillisecond);

void BM_ScanBetaExact(benchmark::State& state) {
  ScanSpec spec;
  spec.protocol = SyncSech2{0.0, pi / 2, 1.0};
  spec.gamma = 0.5;
  spec.grid = uniform_grid(0.0, 10.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_scan(spec));
}
BENCHMARK(BM_ScanBetaExact)->Arg(201)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
