#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "latentlens/archive.hpp"
#include "latentlens/style_code.hpp"

namespace latentlens::editing {

struct FitDiagnostics {
  std::size_t iterations = 0;
  double final_loss = 0.0;
  double train_accuracy = 0.0;
  double gradient_norm = 0.0;
  bool converged = false;
};

/// Linear classification boundary {x : normal . x + offset = 0} with unit
/// normal, oriented so that positives score higher.
struct AttributeBoundary {
  std::string attribute;
  std::string space = "archive";  // latent space the codes came from
  Layout layout;
  std::vector<double> normal;
  double offset = 0.0;
  FitDiagnostics diagnostics;

  double score(const StyleCode& code) const;
};

struct BoundaryOptions {
  double l2_reg = 1.0;  // on centred, RMS-scaled features with a mean loss
  std::size_t max_iter = 1000;
  double tol = 1e-6;  // stop when the gradient norm falls below tol
  std::string attribute;
  std::string space = "archive";
};

/// L2-regularised logistic regression by full-batch gradient descent from
/// zero. Features are centred on the pooled mean and divided by one pooled
/// RMS scale before fitting, and the weights mapped back afterwards. With
/// d close to n, weak regularisation lets the fit lean on spurious channels;
/// the default is set for that regime. Every reduction is
/// done per class and then combined, so swapping the classes yields exactly
/// the negated normal and offset. Throws DegenerateFit when the classes give
/// no gradient at the origin (e.g. identical sets).
AttributeBoundary fit_boundary(std::span<const StyleCode> positives, std::span<const StyleCode> negatives,
                               const BoundaryOptions& options = {});

inline constexpr double kDefaultAgeThreshold = 4.0;

/// Row indices split by age: strictly below threshold -> negatives, else positives.
struct AgePartition {
  std::vector<std::size_t> negatives;
  std::vector<std::size_t> positives;
};
AgePartition age_partition(std::span<const LatentRecord> records, double threshold_years = kDefaultAgeThreshold);

/// Per-layer mask for edits; empty means every layer.
using LayerMask = std::vector<bool>;

/// code + alpha * normal, restricted to layers enabled in `layers`.
StyleCode linear_edit(const StyleCode& code, const AttributeBoundary& boundary, double alpha,
                      const LayerMask& layers = {});

/// (1 - t) * a + t * b elementwise via std::lerp (exact endpoints, and
/// morph(a, a, t) == a). t must lie in [0, 1].
StyleCode morph(const StyleCode& a, const StyleCode& b, double t);

inline const std::vector<double> kPaperMorphRatios = {0.25, 0.5, 0.75};

/// Layers listed in `layers` come from src, the rest from dst.
StyleCode style_mix(const StyleCode& dst, const StyleCode& src, std::span<const std::size_t> layers);

StyleCode set_channel(const StyleCode& code, std::size_t layer, std::size_t channel, double value);
StyleCode shift_channel(const StyleCode& code, std::size_t layer, std::size_t channel, double delta);

/// Parses "0-2,6,7-8" into sorted unique layer indices.
std::vector<std::size_t> parse_layer_list(const std::string& text);

}  // namespace latentlens::editing
