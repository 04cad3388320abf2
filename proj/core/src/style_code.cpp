#include "latentlens/style_code.hpp"

#include <cmath>
#include <string>

#include "latentlens/error.hpp"

namespace latentlens {

Layout::Layout(std::vector<std::size_t> channels_per_layer) : counts_(std::move(channels_per_layer)) {
  if (counts_.empty()) {
    throw InvalidArgument("layout needs at least one layer");
  }
  offsets_.reserve(counts_.size());
  for (const auto count : counts_) {
    if (count == 0) {
      throw InvalidArgument("layout layers must have at least one channel");
    }
    offsets_.push_back(total_);
    total_ += count;
  }
}

std::size_t Layout::flat_index(std::size_t layer, std::size_t channel) const {
  if (layer >= counts_.size() || channel >= counts_[layer]) {
    throw InvalidArgument("channel (" + std::to_string(layer) + ", " + std::to_string(channel) +
                          ") outside layout");
  }
  return offsets_[layer] + channel;
}

ChannelRef Layout::locate(std::size_t flat) const {
  if (flat >= total_) {
    throw InvalidArgument("flat index " + std::to_string(flat) + " outside layout");
  }
  std::size_t layer = counts_.size() - 1;
  while (offsets_[layer] > flat) {
    --layer;
  }
  return {layer, flat - offsets_[layer]};
}

StyleCode::StyleCode(Layout layout) : layout_(std::move(layout)), values_(layout_.total(), 0.0) {
  if (layout_.empty()) {
    throw InvalidArgument("style code needs a non-empty layout");
  }
}

StyleCode::StyleCode(Layout layout, std::vector<double> values)
    : layout_(std::move(layout)), values_(std::move(values)) {
  if (layout_.empty()) {
    throw InvalidArgument("style code needs a non-empty layout");
  }
  if (values_.size() != layout_.total()) {
    throw LayoutMismatch("style code has " + std::to_string(values_.size()) +
                         " values but layout expects " + std::to_string(layout_.total()));
  }
  for (const double v : values_) {
    if (!std::isfinite(v)) {
      throw InvalidArgument("style code contains a non-finite value");
    }
  }
}

std::span<const double> StyleCode::layer(std::size_t index) const {
  return std::span<const double>(values_).subspan(layout_.offset(index), layout_.channels(index));
}

void StyleCode::set(std::size_t flat, double value) {
  if (flat >= values_.size()) {
    throw InvalidArgument("flat index outside style code");
  }
  if (!std::isfinite(value)) {
    throw InvalidArgument("style code values must be finite");
  }
  values_[flat] = value;
}

void require_same_layout(const Layout& a, const Layout& b, const char* what) {
  if (!(a == b)) {
    throw LayoutMismatch(std::string(what) + ": layouts differ");
  }
}

PointMatrix::PointMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

PointMatrix::PointMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw LayoutMismatch("point matrix data size does not match rows x cols");
  }
}

PointMatrix PointMatrix::from_rows(std::span<const std::vector<double>> rows) {
  if (rows.empty()) {
    return {};
  }
  const std::size_t cols = rows.front().size();
  PointMatrix out(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw LayoutMismatch("all points must share one dimension");
    }
    std::copy(rows[i].begin(), rows[i].end(), out.row(i).begin());
  }
  return out;
}

PointMatrix PointMatrix::select(std::span<const std::size_t> indices) const {
  PointMatrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= rows_) {
      throw InvalidArgument("row index outside point matrix");
    }
    const auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

}  // namespace latentlens
