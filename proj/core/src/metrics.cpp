#include "latentlens/metrics.hpp"

#include <cmath>

#include "latentlens/error.hpp"

namespace latentlens::metrics {

namespace {

void require_min_size(std::size_t width, std::size_t height) {
  if (width < 4 || height < 4) {
    throw InvalidArgument("region masks need width and height >= 4");
  }
}

void check_pair(const Raster& img, const Raster& ref, const Raster& mask) {
  if (!img.same_shape(ref)) {
    throw LayoutMismatch("image and reference rasters differ in shape");
  }
  if (mask.width() != img.width() || mask.height() != img.height()) {
    throw LayoutMismatch("mask size differs from the image");
  }
  if (!mask.is_mask()) {
    throw InvalidArgument("mask must be single-channel with values in {0, 1}");
  }
}

/// Sum of squared differences over pixels where mask == want.
double region_sse(const Raster& img, const Raster& ref, const Raster& mask, double want, std::size_t& pixels) {
  const std::size_t channels = img.channels();
  const auto a = img.data();
  const auto b = ref.data();
  const auto m = mask.data();
  double sum = 0.0;
  pixels = 0;
  for (std::size_t p = 0; p < m.size(); ++p) {
    if (m[p] != want) {
      continue;
    }
    ++pixels;
    for (std::size_t ch = 0; ch < channels; ++ch) {
      const double d = a[p * channels + ch] - b[p * channels + ch];
      sum += d * d;
    }
  }
  return sum;
}

}  // namespace

Raster eye_mask(std::size_t width, std::size_t height) {
  require_min_size(width, height);
  return rect_mask(width, height, {width / 4, height / 4, 3 * width / 4, height / 2});
}

Raster mouth_mask(std::size_t width, std::size_t height) {
  require_min_size(width, height);
  return rect_mask(width, height, {width / 4, height / 2, 3 * width / 4, 7 * height / 8});
}

Raster face_mask(std::size_t width, std::size_t height) {
  require_min_size(width, height);
  return rect_mask(width, height, {width / 8, height / 8, 7 * width / 8, 7 * height / 8});
}

std::size_t mask_area(const Raster& mask) {
  if (!mask.is_mask()) {
    throw InvalidArgument("mask must be single-channel with values in {0, 1}");
  }
  std::size_t n = 0;
  for (const double v : mask.data()) {
    n += v == 1.0 ? 1 : 0;
  }
  return n;
}

double masked_mse(const Raster& img, const Raster& ref, const Raster& mask, double lambda) {
  check_pair(img, ref, mask);
  std::size_t pixels = 0;
  const double sse = region_sse(img, ref, mask, 1.0, pixels);
  if (pixels == 0) {
    throw InvalidArgument("mask selects no pixels");
  }
  return lambda * (sse / static_cast<double>(pixels * img.channels()));
}

double plain_mse(const Raster& img, const Raster& ref) {
  if (!img.same_shape(ref)) {
    throw LayoutMismatch("image and reference rasters differ in shape");
  }
  double sum = 0.0;
  const auto a = img.data();
  const auto b = ref.data();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

double mse_outside_mask(const Raster& img, const Raster& ref, const Raster& mask) {
  check_pair(img, ref, mask);
  std::size_t pixels = 0;
  const double sse = region_sse(img, ref, mask, 0.0, pixels);
  if (pixels == 0) {
    throw InvalidArgument("mask complement selects no pixels");
  }
  return sse / static_cast<double>(pixels * img.channels());
}

LossBreakdown composite_loss(const Raster& img, const Raster& ref, const LossWeights& weights,
                             const PairMetric& perceptual, const PairMetric& identity, const Raster& eye_region) {
  for (const double w : {weights.l2, weights.lpips, weights.sim, weights.l2_eye}) {
    if (!(w >= 0.0)) {
      throw InvalidArgument("loss weights must be >= 0");
    }
  }
  LossBreakdown out;
  out.l2 = weights.l2 * plain_mse(img, ref);
  out.l2_eye = masked_mse(img, ref, eye_region, weights.l2_eye);
  out.lpips = perceptual ? weights.lpips * perceptual(img, ref) : 0.0;
  out.sim = identity ? weights.sim * identity(img, ref) : 0.0;
  out.total = out.l2 + out.l2_eye + out.lpips + out.sim;
  return out;
}

Region expression_region(Expression e) {
  switch (e) {
    case Expression::BaredTeeth:
    case Expression::Bark:
    case Expression::Chewing:
    case Expression::LipSmack:
    case Expression::Scream:
    case Expression::Threat:
    case Expression::TongueProtrusion:
    case Expression::TongueShow:
      return Region::Mouth;
    case Expression::Blink:
    case Expression::BrowRaise:
    case Expression::LookUp:
    case Expression::LookDown:
    case Expression::LookLeft:
    case Expression::LookRight:
      return Region::Eye;
    case Expression::Coo:
    case Expression::Yawn:
      return Region::Face;
    case Expression::Neutral:
      break;
  }
  throw InvalidArgument("no evaluation region for expression '" + std::string(to_string(e)) + "'");
}

std::string_view to_string(Region r) noexcept {
  switch (r) {
    case Region::Mouth:
      return "mouth";
    case Region::Eye:
      return "eye";
    case Region::Face:
      return "face";
  }
  return "?";
}

Raster expression_region_mask(Expression e, std::size_t width, std::size_t height) {
  switch (expression_region(e)) {
    case Region::Mouth:
      return mouth_mask(width, height);
    case Region::Eye:
      return eye_mask(width, height);
    case Region::Face:
      return face_mask(width, height);
  }
  throw InvalidArgument("unknown region");
}

MaskSet::MaskSet(std::size_t width, std::size_t height) : width_(width), height_(height) {
  defaults_.emplace(Region::Mouth, mouth_mask(width, height));
  defaults_.emplace(Region::Eye, eye_mask(width, height));
  defaults_.emplace(Region::Face, face_mask(width, height));
}

MaskSet MaskSet::from_directory(const std::filesystem::path& dir, std::size_t width, std::size_t height) {
  MaskSet set(width, height);
  for (const auto e : kMovementExpressions) {
    const auto path = dir / (std::string(latentlens::to_string(e)) + ".f32");
    if (std::filesystem::exists(path)) {
      set.override_mask(e, read_raster(path));
    }
  }
  return set;
}

void MaskSet::override_mask(Expression e, Raster mask) {
  (void)expression_region(e);
  if (!mask.is_mask()) {
    throw InvalidArgument("override for '" + std::string(latentlens::to_string(e)) + "' is not a 0/1 mask");
  }
  if (mask.width() != width_ || mask.height() != height_) {
    throw LayoutMismatch("override mask size differs from the evaluation size");
  }
  overrides_.insert_or_assign(e, std::move(mask));
}

const Raster& MaskSet::for_expression(Expression e) const {
  if (const auto it = overrides_.find(e); it != overrides_.end()) {
    return it->second;
  }
  return defaults_.at(expression_region(e));
}

}  // namespace latentlens::metrics
