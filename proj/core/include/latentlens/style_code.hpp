#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace latentlens {

/// Address of one style channel.
struct ChannelRef {
  std::size_t layer = 0;
  std::size_t channel = 0;

  friend auto operator<=>(const ChannelRef&, const ChannelRef&) = default;
};

/// Per-layer channel counts of a layered latent code. Shared by every code
/// of an archive; the toolkit never assumes a particular architecture.
class Layout {
 public:
  Layout() = default;
  explicit Layout(std::vector<std::size_t> channels_per_layer);

  std::size_t layer_count() const noexcept { return counts_.size(); }
  std::size_t channels(std::size_t layer) const { return counts_.at(layer); }
  std::size_t offset(std::size_t layer) const { return offsets_.at(layer); }
  std::size_t total() const noexcept { return total_; }
  const std::vector<std::size_t>& counts() const noexcept { return counts_; }
  bool empty() const noexcept { return counts_.empty(); }

  /// Flat index of (layer, channel); throws InvalidArgument when out of range.
  std::size_t flat_index(std::size_t layer, std::size_t channel) const;
  std::size_t flat_index(ChannelRef ref) const { return flat_index(ref.layer, ref.channel); }
  /// Inverse of flat_index.
  ChannelRef locate(std::size_t flat) const;

  bool operator==(const Layout& other) const noexcept { return counts_ == other.counts_; }

 private:
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
};

/// Layered latent vector of one image, stored flat (layer-major).
/// All values are finite.
class StyleCode {
 public:
  StyleCode() = default;
  /// Zero code.
  explicit StyleCode(Layout layout);
  StyleCode(Layout layout, std::vector<double> values);

  const Layout& layout() const noexcept { return layout_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const double> flat() const noexcept { return values_; }
  std::span<const double> layer(std::size_t index) const;

  double at(std::size_t layer, std::size_t channel) const {
    return values_[layout_.flat_index(layer, channel)];
  }
  double operator[](std::size_t flat) const { return values_[flat]; }

  /// Checked element write; rejects non-finite values.
  void set(std::size_t flat, double value);

  std::vector<double> release() && noexcept { return std::move(values_); }

  friend bool operator==(const StyleCode&, const StyleCode&) = default;

 private:
  Layout layout_;
  std::vector<double> values_;
};

/// Throws LayoutMismatch unless the two layouts are equal.
void require_same_layout(const Layout& a, const Layout& b, const char* what);

/// Dense row-major matrix of points, the working representation for
/// distance-based algorithms.
class PointMatrix {
 public:
  PointMatrix() = default;
  PointMatrix(std::size_t rows, std::size_t cols);
  PointMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static PointMatrix from_rows(std::span<const std::vector<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }

  /// Rows `indices` in the given order.
  PointMatrix select(std::span<const std::size_t> indices) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;

}  // namespace latentlens
