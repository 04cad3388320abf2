#include <benchmark/benchmark.h>

#include "latentlens/editing.hpp"
#include "latentlens/rng.hpp"

namespace {

std::vector<latentlens::StyleCode> cluster(const latentlens::Layout& layout, std::size_t n, double shift,
                                           std::uint64_t seed) {
  latentlens::Rng rng(seed);
  std::vector<latentlens::StyleCode> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(layout.total());
    for (auto& x : v) {
      x = rng.normal();
    }
    v[0] += shift;
    out.emplace_back(layout, std::move(v));
  }
  return out;
}

void BM_FitBoundary(benchmark::State& state) {
  const latentlens::Layout layout({static_cast<std::size_t>(state.range(0))});
  const auto pos = cluster(layout, 500, 2.0, 1);
  const auto neg = cluster(layout, 500, 0.0, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(latentlens::editing::fit_boundary(pos, neg));
  }
}
BENCHMARK(BM_FitBoundary)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace
