#include <benchmark/benchmark.h>

#include <filesystem>

#include "latentlens/archive.hpp"
#include "latentlens/rng.hpp"

namespace {

namespace fs = std::filesystem;

latentlens::LatentArchive make_archive(std::size_t n) {
  latentlens::Layout layout(std::vector<std::size_t>(9, 512));
  latentlens::Rng rng(5);
  std::vector<latentlens::LatentRecord> records;
  records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(layout.total());
    for (auto& x : v) {
      x = static_cast<float>(rng.normal());
    }
    latentlens::LatentRecord r;
    r.id = "r" + std::to_string(i);
    r.code = latentlens::StyleCode(layout, std::move(v));
    records.push_back(std::move(r));
  }
  return latentlens::LatentArchive(layout, std::move(records));
}

void BM_ArchiveRoundTrip(benchmark::State& state) {
  const auto archive = make_archive(static_cast<std::size_t>(state.range(0)));
  const auto dir = fs::temp_directory_path() / "latentlens_bench_archive";
  for (auto _ : state) {
    latentlens::write_archive(archive, dir);
    benchmark::DoNotOptimize(latentlens::load_archive(dir));
  }
  fs::remove_all(dir);
  state.SetBytesProcessed(state.iterations() * state.range(0) * 9 * 512 * 4);
}
BENCHMARK(BM_ArchiveRoundTrip)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
