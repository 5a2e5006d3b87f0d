#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "lab/dyadic_measure.hpp"
#include "lab/fourier.hpp"
#include "lab/riesz.hpp"

namespace {

lab::DyadicMeasure random_measure(int depth, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<double> w(std::size_t{1} << depth);
  double total = 0.0;
  for (double& x : w) total += (x = dist(rng));
  for (double& x : w) x /= total;
  return lab::DyadicMeasure::dense(depth, std::move(w));
}

void BM_batch_transform_ref(benchmark::State& state) {
  const auto mu = random_measure(static_cast<int>(state.range(0)), 11);
  const std::uint64_t j_max = static_cast<std::uint64_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lab::ref::batch_integer_transform(mu, j_max));
  }
}

void BM_batch_transform(benchmark::State& state) {
  const auto mu = random_measure(static_cast<int>(state.range(0)), 11);
  const std::uint64_t j_max = static_cast<std::uint64_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lab::batch_integer_transform(mu, j_max));
  }
}

void BM_riesz_energy_ref(benchmark::State& state) {
  const auto mu = random_measure(static_cast<int>(state.range(0)), 13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lab::ref::riesz_energy_direct(mu, 0.8));
  }
}

void BM_riesz_energy(benchmark::State& state) {
  const auto mu = random_measure(static_cast<int>(state.range(0)), 13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lab::riesz_energy(mu, 0.8));
  }
}

}  // namespace

BENCHMARK(BM_batch_transform_ref)
    ->Args({12, 1024})
    ->Args({16, 4096})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_batch_transform)
    ->Args({12, 1024})
    ->Args({16, 4096})
    ->Args({20, 65536})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_riesz_energy_ref)
    ->Args({10})
    ->Args({12})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_riesz_energy)
    ->Args({10})
    ->Args({12})
    ->Args({16})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
