#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/digamma.hpp>

#include "latentlens/curation/entropy.hpp"
#include "latentlens/curation/sampling.hpp"
#include "latentlens/error.hpp"
#include "latentlens/parallel.hpp"
#include "latentlens/rng.hpp"

namespace latentlens::curation {

namespace {

double log_radius(double squared) noexcept {
  if (squared > 0.0) {
    return 0.5 * std::log(squared);
  }
  return std::log(std::numeric_limits<double>::denorm_min());
}

double kl_formula(std::size_t n, std::size_t k, std::size_t dim, double sum_log_radius) {
  const double nn = static_cast<double>(n);
  return boost::math::digamma(nn) - boost::math::digamma(static_cast<double>(k)) +
         log_unit_ball_volume(dim) + static_cast<double>(dim) * (sum_log_radius / nn);
}

void check_entropy_input(const PointMatrix& points, std::size_t k) {
  if (k < 1) {
    throw InvalidArgument("entropy estimator needs k >= 1");
  }
  if (points.cols() == 0) {
    throw InvalidArgument("entropy estimator needs points of dimension >= 1");
  }
  if (points.rows() < k + 1) {
    throw InvalidArgument("entropy estimator needs at least k + 1 = " + std::to_string(k + 1) +
                          " points, got " + std::to_string(points.rows()));
  }
}

struct Neighbor {
  double d2;
  std::size_t index;
  friend bool operator<(const Neighbor& a, const Neighbor& b) noexcept {
    return a.d2 < b.d2 || (a.d2 == b.d2 && a.index < b.index);
  }
};

/// Sorted nearest-neighbour lists (first `depth` neighbours of every row).
class NeighborTable {
 public:
  NeighborTable(const PointMatrix& points, std::size_t depth)
      : depth_(std::min(depth, points.rows() - 1)), table_(points.rows() * depth_) {
    const std::size_t n = points.rows();
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
      std::vector<Neighbor> scratch;
      scratch.reserve(n - 1);
      for (std::size_t i = begin; i < end; ++i) {
        scratch.clear();
        const auto xi = points.row(i);
        for (std::size_t j = 0; j < n; ++j) {
          if (j != i) {
            scratch.push_back({squared_distance(xi, points.row(j)), j});
          }
        }
        std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(depth_), scratch.end());
        std::copy_n(scratch.begin(), depth_, table_.begin() + static_cast<std::ptrdiff_t>(i * depth_));
      }
    });
  }

  /// Squared distance to the k-th neighbour of `row` ignoring rows with excluded[j] set.
  double kth(std::size_t row, std::size_t k, const std::vector<char>& excluded) const {
    std::size_t seen = 0;
    for (std::size_t p = 0; p < depth_; ++p) {
      const auto& nb = table_[row * depth_ + p];
      if (excluded[nb.index]) {
        continue;
      }
      if (++seen == k) {
        return nb.d2;
      }
    }
    throw InvalidArgument("neighbour table too shallow for the requested exclusion");
  }

 private:
  std::size_t depth_;
  std::vector<Neighbor> table_;
};

}  // namespace

double log_unit_ball_volume(std::size_t dim) {
  const double d = static_cast<double>(dim);
  return 0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d + 1.0);
}

EntropyEstimate knn_entropy(const PointMatrix& points, std::size_t k) {
  check_entropy_input(points, k);
  const std::size_t n = points.rows();
  std::vector<double> log_r(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    std::vector<double> d2;
    d2.reserve(n - 1);
    for (std::size_t i = begin; i < end; ++i) {
      d2.clear();
      const auto xi = points.row(i);
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) {
          d2.push_back(squared_distance(xi, points.row(j)));
        }
      }
      std::nth_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(k - 1), d2.end());
      log_r[i] = log_radius(d2[k - 1]);
    }
  });
  double sum = 0.0;
  for (const double v : log_r) {
    sum += v;
  }
  return {kl_formula(n, k, points.cols(), sum), 0.0, k, n, EntropyMethod::Plain};
}

std::vector<std::size_t> jackknife_folds(std::size_t n, std::size_t groups, std::uint64_t seed) {
  if (groups < 2 || groups > n) {
    throw InvalidArgument("jackknife groups must be in [2, n] (groups = " + std::to_string(groups) +
                          ", n = " + std::to_string(n) + ")");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<std::size_t> fold(n);
  for (std::size_t j = 0; j < groups; ++j) {
    const std::size_t lo = j * n / groups;
    const std::size_t hi = (j + 1) * n / groups;
    for (std::size_t p = lo; p < hi; ++p) {
      fold[order[p]] = j;
    }
  }
  return fold;
}

JackknifeResult jackknife(std::size_t n, std::size_t groups, std::uint64_t seed, const SubsetStatistic& statistic) {
  const auto fold = jackknife_folds(n, groups, seed);

  JackknifeResult out;
  out.fold_sizes.assign(groups, 0);
  for (const auto f : fold) {
    ++out.fold_sizes[f];
  }

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  out.full = statistic(all);

  out.leave_out.assign(groups, 0.0);
  parallel_for(groups, [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> kept;
    kept.reserve(n);
    for (std::size_t j = begin; j < end; ++j) {
      kept.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (fold[i] != j) {
          kept.push_back(i);
        }
      }
      out.leave_out[j] = statistic(kept);
    }
  });

  const double nn = static_cast<double>(n);
  const double g = static_cast<double>(groups);
  double correction = 0.0;
  for (std::size_t j = 0; j < groups; ++j) {
    correction += (1.0 - static_cast<double>(out.fold_sizes[j]) / nn) * out.leave_out[j];
  }
  out.estimate = g * out.full - correction;

  double variance = 0.0;
  for (std::size_t j = 0; j < groups; ++j) {
    const double h = nn / static_cast<double>(out.fold_sizes[j]);
    const double pseudo = h * out.full - (h - 1.0) * out.leave_out[j];
    const double dev = pseudo - out.estimate;
    variance += dev * dev / (h - 1.0);
  }
  out.standard_error = std::sqrt(variance / g);
  return out;
}

EntropyEstimate jackknife_entropy(const PointMatrix& points, std::size_t k, std::size_t groups, std::uint64_t seed) {
  check_entropy_input(points, k);
  const std::size_t n = points.rows();
  if (groups < 2 || groups > n) {
    throw InvalidArgument("jackknife groups must be in [2, n] (groups = " + std::to_string(groups) +
                          ", n = " + std::to_string(n) + ")");
  }
  const std::size_t largest_fold = (n + groups - 1) / groups;
  if (n - largest_fold < k + 1) {
    throw InvalidArgument("too few points left after removing a jackknife fold");
  }

  const NeighborTable table(points, k + largest_fold);
  const std::size_t dim = points.cols();
  const auto statistic = [&](std::span<const std::size_t> kept) {
    std::vector<char> excluded(n, 1);
    for (const auto i : kept) {
      excluded[i] = 0;
    }
    double sum = 0.0;
    for (const auto i : kept) {
      sum += log_radius(table.kth(i, k, excluded));
    }
    return kl_formula(kept.size(), k, dim, sum);
  };

  const auto result = jackknife(n, groups, seed, statistic);
  return {result.estimate, result.standard_error, k, n, EntropyMethod::Jackknife};
}

SweepResult sweep_sample_sizes(const LatentArchive& archive, const SweepOptions& options) {
  if (options.sizes.empty()) {
    throw InvalidArgument("sample-size sweep needs at least one size");
  }
  const auto max_size = *std::max_element(options.sizes.begin(), options.sizes.end());
  if (max_size > archive.size()) {
    throw InvalidArgument("sweep size " + std::to_string(max_size) + " exceeds archive size " +
                          std::to_string(archive.size()));
  }
  const auto codes = archive.code_matrix();
  SweepResult out;
  out.seed = options.seed;
  for (const auto size : options.sizes) {
    SamplingOptions sampling;
    sampling.n = size;
    sampling.seed = options.seed;
    sampling.exponent = options.exponent;
    auto picked = weighted_diversity_sample(codes, sampling).indices;
    std::sort(picked.begin(), picked.end());
    const auto subset = codes.select(picked);
    out.rows.push_back({size, jackknife_entropy(subset, options.k, options.groups, options.seed)});
  }

  const auto best = std::max_element(out.rows.begin(), out.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.entropy.value < b.entropy.value;
  });
  out.plateau_size = best->size;
  for (const auto& row : out.rows) {
    if (row.entropy.value >= best->entropy.value - best->entropy.standard_error && row.size < out.plateau_size) {
      out.plateau_size = row.size;
    }
  }
  return out;
}

std::string sweep_csv(const SweepResult& sweep) {
  std::ostringstream out;
  out.precision(17);
  out << "size,entropy_nats,stderr_nats,seed\n";
  for (const auto& row : sweep.rows) {
    out << row.size << ',' << row.entropy.value << ',' << row.entropy.standard_error << ',' << sweep.seed << '\n';
  }
  return out.str();
}

}  // namespace latentlens::curation
