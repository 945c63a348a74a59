#include <benchmark/benchmark.h>

#include <random>

#include "dmdgp/geometry.hpp"
#include "dmdgp/instance.hpp"
#include "dmdgp/solver.hpp"
#include "dmdgp/symmetry.hpp"

namespace {

void BM_ExtendPositions(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<dmdgp::Point> anchors;
  for (int j = 0; j < k; ++j) {
    dmdgp::Point p(k);
    for (int c = 0; c < k; ++c) p[c] = u(rng);
    anchors.push_back(p);
  }
  dmdgp::Point target(k);
  for (int c = 0; c < k; ++c) target[c] = u(rng);
  std::vector<double> radii;
  for (const auto& a : anchors) radii.push_back((target - a).norm());
  for (auto _ : state) benchmark::DoNotOptimize(dmdgp::extend_positions(anchors, radii));
}
BENCHMARK(BM_ExtendPositions)->DenseRange(2, 5);

// Chains without pruning edges: the tree is complete, 2^(n-K) leaves.
void BM_SolveChain(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto inst = dmdgp::random_instance(3, n, 0.0, 42).instance;
  for (auto _ : state) benchmark::DoNotOptimize(dmdgp::solve(inst));
  state.counters["leaves"] = static_cast<double>(std::size_t{1} << (n - 3));
}
BENCHMARK(BM_SolveChain)->DenseRange(8, 18, 2)->Unit(benchmark::kMillisecond);

void BM_SolvePruned(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto inst = dmdgp::random_instance(3, n, 0.2, 42).instance;
  for (auto _ : state) benchmark::DoNotOptimize(dmdgp::solve(inst));
}
BENCHMARK(BM_SolvePruned)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMillisecond);

void BM_SolveThreads(benchmark::State& state) {
  const auto inst = dmdgp::random_instance(3, 20, 0.0, 42).instance;
  dmdgp::SolverOptions opts;
  opts.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dmdgp::solve(inst, opts));
}
BENCHMARK(BM_SolveThreads)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_VerifyOrbit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto result = dmdgp::solve(dmdgp::random_instance(3, n, 0.0, 7).instance);
  for (auto _ : state) benchmark::DoNotOptimize(dmdgp::verify_orbit(result));
}
BENCHMARK(BM_VerifyOrbit)->DenseRange(8, 14, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
