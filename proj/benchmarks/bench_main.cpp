#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "steptx/alignment.hpp"
#include "steptx/selection.hpp"
#include "steptx/signal.hpp"
#include "steptx/solvers.hpp"

namespace {

using namespace steptx;

Signal noisy_steps(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.5);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = static_cast<double>((i * 8) / n) + noise(rng);
  }
  return Signal(v);
}

void BM_SolveL1(benchmark::State& state) {
  const Signal v = noisy_steps(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_l1(v, 0.1));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveL1)->Range(256, 1 << 16)->Complexity();

void BM_SolveL0(benchmark::State& state) {
  const Signal v = noisy_steps(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_l0(v, 0.05));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveL0)->Range(64, 4096)->Complexity(benchmark::oNSquared);

void BM_Expand(benchmark::State& state) {
  const Signal v = noisy_steps(200, 3);
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(expand(v, m));
  }
}
BENCHMARK(BM_Expand)->Range(400, 1 << 16);

void BM_Average(benchmark::State& state) {
  const Signal v = noisy_steps(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(average(v, 200));
  }
}
BENCHMARK(BM_Average)->Range(400, 1 << 16);

void BM_ScreenedNorm(benchmark::State& state) {
  const Signal y = noisy_steps(200, 5);
  const Signal source = noisy_steps(static_cast<std::size_t>(state.range(0)), 6);
  for (auto _ : state) {
    const auto dev = normalized_deviation(y, source);
    benchmark::DoNotOptimize(screened_sq_norm(dev, 50));
  }
}
BENCHMARK(BM_ScreenedNorm)->Range(400, 1 << 14);

}  // namespace

BENCHMARK_MAIN();
