#include <benchmark/benchmark.h>

#include "latentlens/curation/entropy.hpp"
#include "latentlens/curation/sampling.hpp"
#include "latentlens/rng.hpp"

namespace {

latentlens::PointMatrix gaussian(std::size_t n, std::size_t d, std::uint64_t seed) {
  latentlens::Rng rng(seed);
  std::vector<double> data(n * d);
  for (auto& v : data) {
    v = rng.normal();
  }
  return latentlens::PointMatrix(n, d, std::move(data));
}

void BM_KnnEntropy(benchmark::State& state) {
  const auto points = gaussian(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(latentlens::curation::knn_entropy(points, 3));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KnnEntropy)->Args({1000, 8})->Args({4000, 8})->Args({1000, 512})->Unit(benchmark::kMillisecond);

void BM_JackknifeEntropy(benchmark::State& state) {
  const auto points = gaussian(static_cast<std::size_t>(state.range(0)), 8, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(latentlens::curation::jackknife_entropy(points, 3, 300, 0));
  }
}
BENCHMARK(BM_JackknifeEntropy)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_WeightedSample(benchmark::State& state) {
  const auto points = gaussian(static_cast<std::size_t>(state.range(0)), 64, 3);
  latentlens::curation::SamplingOptions opt;
  opt.n = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(latentlens::curation::weighted_diversity_sample(points, opt));
  }
}
BENCHMARK(BM_WeightedSample)->Args({10000, 500})->Args({50000, 500})->Unit(benchmark::kMillisecond);

}  // namespace
