#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "latentlens/archive.hpp"
#include "latentlens/style_code.hpp"

namespace latentlens::curation {

enum class EntropyMethod { Plain, Jackknife };

struct EntropyEstimate {
  double value = 0.0;           // nats
  double standard_error = 0.0;  // nats; 0 for the plain estimator
  std::size_t k = 0;
  std::size_t n = 0;
  EntropyMethod method = EntropyMethod::Plain;
};

inline constexpr std::size_t kDefaultNeighbors = 3;
inline constexpr std::size_t kDefaultJackknifeGroups = 300;

/// Kozachenko-Leonenko k-nearest-neighbour differential entropy (nats,
/// Euclidean metric):
///
///   H = psi(n) - psi(k) + ln V_d + (d / n) * sum_i ln r_i
///
/// with r_i the distance from point i to its k-th nearest neighbour and
/// V_d = pi^(d/2) / Gamma(d/2 + 1) the volume of the unit-radius ball.
/// A zero r_i (duplicate points) is replaced by the smallest positive double
/// before taking the log. Requires n >= k + 1.
EntropyEstimate knn_entropy(const PointMatrix& points, std::size_t k = kDefaultNeighbors);

/// Log of the unit-radius Euclidean ball volume in `dim` dimensions.
double log_unit_ball_volume(std::size_t dim);

/// Result of a delete-group jackknife.
struct JackknifeResult {
  double full = 0.0;       // statistic on all points
  double estimate = 0.0;   // bias-corrected
  double standard_error = 0.0;
  std::vector<double> leave_out;  // statistic with fold j removed
  std::vector<std::size_t> fold_sizes;
};

/// Statistic evaluated on the rows listed (ascending) in `kept`.
using SubsetStatistic = std::function<double(std::span<const std::size_t> kept)>;

/// Delete-group jackknife. Rows are shuffled with Rng(seed) and cut into
/// `groups` folds whose sizes differ by at most one. With g folds of sizes
/// m_j over n rows, full statistic T and leave-fold-out statistics T_j:
///
///   estimate = g * T - sum_j (1 - m_j / n) * T_j
///   SE^2     = (1 / g) * sum_j (h_j * T - (h_j - 1) * T_j - estimate)^2 / (h_j - 1),
///   h_j = n / m_j
///
/// which is g*T - (g-1)*mean(T_j) with the usual SE when folds are equal,
/// and keeps the estimate of a sample mean exactly equal to the mean when
/// they are not. Requires 2 <= groups <= n.
JackknifeResult jackknife(std::size_t n, std::size_t groups, std::uint64_t seed, const SubsetStatistic& statistic);

/// Fold assignment used by jackknife(): fold index of every row.
std::vector<std::size_t> jackknife_folds(std::size_t n, std::size_t groups, std::uint64_t seed);

/// Jackknifed k-NN entropy. Each leave-fold-out estimate equals
/// knn_entropy() on the kept rows; neighbour lists are computed once.
EntropyEstimate jackknife_entropy(const PointMatrix& points, std::size_t k = kDefaultNeighbors,
                                  std::size_t groups = kDefaultJackknifeGroups, std::uint64_t seed = 0);

inline const std::vector<std::size_t> kPaperSweepSizes = {500, 1000, 2000, 3000, 4000, 5000, 10000};

struct SweepOptions {
  std::vector<std::size_t> sizes = kPaperSweepSizes;
  std::size_t k = kDefaultNeighbors;
  std::size_t groups = kDefaultJackknifeGroups;
  std::uint64_t seed = 0;
  double exponent = 2.0;
};

struct SweepRow {
  std::size_t size = 0;
  EntropyEstimate entropy;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::uint64_t seed = 0;
  /// Smallest size whose entropy is within one jackknife SE of the maximum.
  std::size_t plateau_size = 0;
};

/// For each size: weighted_diversity_sample, then jackknife_entropy on the
/// selected codes taken in archive order.
SweepResult sweep_sample_sizes(const LatentArchive& archive, const SweepOptions& options);

/// CSV with header size,entropy_nats,stderr_nats,seed.
std::string sweep_csv(const SweepResult& sweep);

}  // namespace latentlens::curation
