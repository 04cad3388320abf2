#include <cmath>
#include <limits>
#include <numeric>

#include "latentlens/curation/sampling.hpp"
#include "latentlens/error.hpp"
#include "latentlens/parallel.hpp"
#include "latentlens/rng.hpp"

namespace latentlens::curation {

SampleSelection weighted_diversity_sample(const PointMatrix& points, const SamplingOptions& options) {
  const std::size_t total = points.rows();
  if (total == 0) {
    throw InvalidArgument("cannot sample from an empty set");
  }
  if (options.n < 1 || options.n > total) {
    throw InvalidArgument("sample size " + std::to_string(options.n) + " outside [1, " +
                          std::to_string(total) + "]");
  }
  if (!(options.exponent >= 0.0) || !std::isfinite(options.exponent)) {
    throw InvalidArgument("weight exponent must be finite and >= 0");
  }
  if (options.first_index && *options.first_index >= total) {
    throw InvalidArgument("forced first index outside the point set");
  }

  Rng rng(options.seed);
  SampleSelection out;
  out.seed = options.seed;
  out.weight_exponent = options.exponent;
  out.indices.reserve(options.n);

  std::vector<double> min_d2(total, std::numeric_limits<double>::infinity());
  std::vector<double> weight(total, 0.0);
  std::vector<char> taken(total, 0);

  const std::size_t first = options.first_index ? *options.first_index : rng.bounded(total);
  out.indices.push_back(first);
  taken[first] = 1;

  const double half_exponent = options.exponent / 2.0;
  for (std::size_t draw = 1; draw < options.n; ++draw) {
    const auto last = points.row(out.indices.back());
    parallel_for(total, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        if (taken[i]) {
          weight[i] = 0.0;
          continue;
        }
        min_d2[i] = std::min(min_d2[i], squared_distance(points.row(i), last));
        weight[i] = half_exponent == 1.0 ? min_d2[i] : std::pow(min_d2[i], half_exponent);
      }
    });

    double sum = 0.0;
    for (const double w : weight) {
      sum += w;
    }

    std::size_t chosen = total;
    if (sum > 0.0 && std::isfinite(sum)) {
      const double target = rng.uniform01() * sum;
      double running = 0.0;
      std::size_t last_positive = total;
      for (std::size_t i = 0; i < total; ++i) {
        if (weight[i] <= 0.0) {
          continue;
        }
        last_positive = i;
        running += weight[i];
        if (target < running) {
          chosen = i;
          break;
        }
      }
      // Rounding can leave target == running at the end of the scan.
      if (chosen == total) {
        chosen = last_positive;
      }
      if (options.record_weights) {
        auto& normalized = out.draw_weights.emplace_back(weight);
        for (auto& w : normalized) {
          w /= sum;
        }
      }
    } else {
      ++out.uniform_fallbacks;
      auto skip = rng.bounded(total - out.indices.size());
      for (std::size_t i = 0; i < total; ++i) {
        if (taken[i]) {
          continue;
        }
        if (skip == 0) {
          chosen = i;
          break;
        }
        --skip;
      }
      if (options.record_weights) {
        auto& uniform = out.draw_weights.emplace_back(total, 0.0);
        const double p = 1.0 / static_cast<double>(total - out.indices.size());
        for (std::size_t i = 0; i < total; ++i) {
          uniform[i] = taken[i] ? 0.0 : p;
        }
      }
    }
    out.indices.push_back(chosen);
    taken[chosen] = 1;
  }
  return out;
}

SampleSelection weighted_diversity_sample(const LatentArchive& archive, const SamplingOptions& options) {
  if (archive.empty()) {
    throw InvalidArgument("cannot sample from an empty archive");
  }
  auto out = weighted_diversity_sample(archive.code_matrix(), options);
  out.ids.reserve(out.indices.size());
  for (const auto i : out.indices) {
    out.ids.push_back(archive[i].id);
  }
  return out;
}

std::vector<std::size_t> uniform_sample(std::size_t population, std::size_t n, std::uint64_t seed) {
  if (n > population) {
    throw InvalidArgument("uniform sample larger than population");
  }
  std::vector<std::size_t> order(population);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  // Partial Fisher-Yates: the first n slots are the sample.
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.bounded(population - i));
    std::swap(order[i], order[j]);
  }
  order.resize(n);
  return order;
}

}  // namespace latentlens::curation
