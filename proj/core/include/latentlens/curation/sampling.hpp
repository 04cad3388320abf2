#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latentlens/archive.hpp"
#include "latentlens/style_code.hpp"

namespace latentlens::curation {

struct SamplingOptions {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  /// Draw weight is d_min^exponent; 2 gives k-means++ D^2 seeding, 1 raw distance.
  double exponent = 2.0;
  /// Forces the first pick instead of drawing it uniformly (test hook).
  std::optional<std::size_t> first_index;
  /// Keep the normalized weight vector used for every draw after the first.
  bool record_weights = false;
};

struct SampleSelection {
  std::vector<std::string> ids;
  std::vector<std::size_t> indices;  // archive row of each id, in draw order
  std::uint64_t seed = 0;
  double weight_exponent = 2.0;
  /// draw_weights[t] is the distribution of draw t + 1 over all rows
  /// (selected rows have weight 0). Empty unless requested.
  std::vector<std::vector<double>> draw_weights;
  /// Draws that fell back to uniform because every residual weight was 0.
  std::size_t uniform_fallbacks = 0;
};

/// Diversity-weighted sampling without replacement. The first item is uniform;
/// each later item is drawn with probability proportional to d_min^exponent,
/// d_min being the Euclidean distance to the closest item already selected.
/// When every unselected item has weight 0 the draw is uniform over them.
SampleSelection weighted_diversity_sample(const PointMatrix& points, const SamplingOptions& options);
SampleSelection weighted_diversity_sample(const LatentArchive& archive, const SamplingOptions& options);

/// Uniform sampling without replacement (the baseline the weighted sampler
/// is compared against).
std::vector<std::size_t> uniform_sample(std::size_t population, std::size_t n, std::uint64_t seed);

}  // namespace latentlens::curation
