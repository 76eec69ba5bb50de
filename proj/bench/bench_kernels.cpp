// Serial reference vs OpenMP kernels. Set OMP_NUM_THREADS to compare scaling.

#include <benchmark/benchmark.h>

#include <mixid/kernels.hpp>
#include <mixid/random_model.hpp>
#include <mixid/recovery.hpp>
#include <mixid/rng.hpp>

using namespace mixid;

namespace {

FloatParams bench_params(int K, int L, int M) {
  Rng rng(99);
  return to_float(random_rational_params(K, L, M, rng));
}

void BM_Distribution_Serial(benchmark::State& state) {
  const auto p = bench_params(3, static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(mixture_distribution_serial(p));
}

void BM_Distribution_OpenMP(benchmark::State& state) {
  const auto p = bench_params(3, static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(mixture_distribution(p));
}

void BM_EmStep_Serial(benchmark::State& state) {
  const auto truth = bench_params(3, static_cast<int>(state.range(0)), 3);
  const auto dist = mixture_distribution(truth);
  Rng rng(7);
  const auto p = random_start(3, truth.L(), 3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(em_step_serial(dist, p));
}

void BM_EmStep_OpenMP(benchmark::State& state) {
  const auto truth = bench_params(3, static_cast<int>(state.range(0)), 3);
  const auto dist = mixture_distribution(truth);
  Rng rng(7);
  const auto p = random_start(3, truth.L(), 3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(em_step(dist, p));
}

void BM_ExactDistribution_Serial(benchmark::State& state) {
  Rng rng(5);
  const auto p = random_rational_params(3, static_cast<int>(state.range(0)), 3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(mixture_distribution_serial(p));
}

void BM_ExactDistribution_OpenMP(benchmark::State& state) {
  Rng rng(5);
  const auto p = random_rational_params(3, static_cast<int>(state.range(0)), 3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(mixture_distribution(p));
}

}  // namespace

BENCHMARK(BM_Distribution_Serial)->DenseRange(6, 10, 2);
BENCHMARK(BM_Distribution_OpenMP)->DenseRange(6, 10, 2);
BENCHMARK(BM_EmStep_Serial)->DenseRange(6, 10, 2);
BENCHMARK(BM_EmStep_OpenMP)->DenseRange(6, 10, 2);
BENCHMARK(BM_ExactDistribution_Serial)->Arg(5)->Arg(7);
BENCHMARK(BM_ExactDistribution_OpenMP)->Arg(5)->Arg(7);

BENCHMARK_MAIN();
