#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace latentlens {

/// Float image grid, row-major with interleaved channels:
/// value(x, y, ch) = data[(y * width + x) * channels + ch].
class Raster {
 public:
  Raster() = default;
  Raster(std::size_t width, std::size_t height, std::size_t channels, double fill = 0.0);
  Raster(std::size_t width, std::size_t height, std::size_t channels, std::vector<double> data);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t area() const noexcept { return width_ * height_; }

  double at(std::size_t x, std::size_t y, std::size_t ch = 0) const {
    return data_[(y * width_ + x) * channels_ + ch];
  }
  double& at(std::size_t x, std::size_t y, std::size_t ch = 0) {
    return data_[(y * width_ + x) * channels_ + ch];
  }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  bool same_shape(const Raster& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
  }
  /// True when single-channel with every value exactly 0 or 1.
  bool is_mask() const noexcept;

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::size_t channels_ = 0;
  std::vector<double> data_;
};

/// Pixel rectangle [x0, x1) x [y0, y1).
struct PixelRect {
  std::size_t x0 = 0;
  std::size_t y0 = 0;
  std::size_t x1 = 0;
  std::size_t y1 = 0;

  bool contains(std::size_t x, std::size_t y) const noexcept {
    return x >= x0 && x < x1 && y >= y0 && y < y1;
  }
  friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

/// Single-channel 0/1 raster that is 1 inside `rect`.
Raster rect_mask(std::size_t width, std::size_t height, PixelRect rect);

// Raster files: `path` holds raw binary32 little-endian values in Raster
// order, `path` + ".json" holds {"w":..,"h":..,"c":..}.
Raster read_raster(const std::filesystem::path& path);
void write_raster(const Raster& raster, const std::filesystem::path& path);
std::filesystem::path raster_sidecar(const std::filesystem::path& path);

}  // namespace latentlens
