#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "latentlens/raster.hpp"
#include "latentlens/record.hpp"

namespace latentlens::metrics {

/// Eye region: columns [W/4, 3W/4), rows [H/4, H/2), floors applied.
/// Requires W, H >= 4.
Raster eye_mask(std::size_t width, std::size_t height);
/// Mouth region: columns [W/4, 3W/4), rows [H/2, 7H/8).
Raster mouth_mask(std::size_t width, std::size_t height);
/// Whole face: columns [W/8, 7W/8), rows [H/8, 7H/8).
Raster face_mask(std::size_t width, std::size_t height);

/// lambda * mean over masked pixels and all channels of (img - ref)^2. The
/// mask is single-channel and broadcast over image channels. Throws on an
/// empty mask or a shape mismatch.
double masked_mse(const Raster& img, const Raster& ref, const Raster& mask, double lambda = 1.0);
/// Mean of (img - ref)^2 over every pixel and channel.
double plain_mse(const Raster& img, const Raster& ref);
/// Mean of (img - ref)^2 over pixels where mask == 0.
double mse_outside_mask(const Raster& img, const Raster& ref, const Raster& mask);
/// Number of pixels set in a mask.
std::size_t mask_area(const Raster& mask);

struct LossWeights {
  double l2 = 1.0;
  double lpips = 0.8;
  double sim = 0.5;
  double l2_eye = 0.0;  // 0, 5, 10 or 50 in the reported runs
};

struct LossBreakdown {
  double l2 = 0.0;      // weighted full-image MSE
  double l2_eye = 0.0;  // weighted eye-region MSE
  double lpips = 0.0;   // weighted perceptual term
  double sim = 0.0;     // weighted identity-similarity term
  double total = 0.0;
};

/// Perceptual / identity plug-in: a pure function of an image pair.
using PairMetric = std::function<double(const Raster&, const Raster&)>;

/// Weighted sum of full-image MSE, eye-region masked MSE and the two plug-in
/// terms. An empty plug-in contributes 0.
LossBreakdown composite_loss(const Raster& img, const Raster& ref, const LossWeights& weights,
                             const PairMetric& perceptual, const PairMetric& identity, const Raster& eye_region);

enum class Region { Mouth, Eye, Face };

/// Evaluation region of each movement expression. Throws InvalidArgument
/// for Neutral.
Region expression_region(Expression e);
std::string_view to_string(Region r) noexcept;

/// Region masks for a raster size, with optional per-expression overrides.
class MaskSet {
 public:
  MaskSet(std::size_t width, std::size_t height);

  /// Loads `<dir>/<Expression name>.f32` (+ sidecar) for every expression
  /// that has one; the rest keep the default rectangles.
  static MaskSet from_directory(const std::filesystem::path& dir, std::size_t width, std::size_t height);

  void override_mask(Expression e, Raster mask);
  const Raster& for_expression(Expression e) const;

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }

 private:
  std::size_t width_;
  std::size_t height_;
  std::map<Region, Raster> defaults_;
  std::map<Expression, Raster> overrides_;
};

/// Mask for `e` under the default rectangles.
Raster expression_region_mask(Expression e, std::size_t width, std::size_t height);

}  // namespace latentlens::metrics
