#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "latentlens/error.hpp"
#include "latentlens/raster.hpp"

namespace latentlens {

namespace fs = std::filesystem;

Raster::Raster(std::size_t width, std::size_t height, std::size_t channels, double fill)
    : width_(width), height_(height), channels_(channels), data_(width * height * channels, fill) {
  if (width == 0 || height == 0 || channels == 0) {
    throw InvalidArgument("raster dimensions must be at least 1");
  }
}

Raster::Raster(std::size_t width, std::size_t height, std::size_t channels, std::vector<double> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  if (width == 0 || height == 0 || channels == 0) {
    throw InvalidArgument("raster dimensions must be at least 1");
  }
  if (data_.size() != width * height * channels) {
    throw LayoutMismatch("raster data size does not match its dimensions");
  }
  for (const double v : data_) {
    if (!std::isfinite(v)) {
      throw InvalidArgument("raster values must be finite");
    }
  }
}

bool Raster::is_mask() const noexcept {
  if (channels_ != 1) {
    return false;
  }
  for (const double v : data_) {
    if (v != 0.0 && v != 1.0) {
      return false;
    }
  }
  return true;
}

Raster rect_mask(std::size_t width, std::size_t height, PixelRect rect) {
  if (rect.x1 > width || rect.y1 > height || rect.x0 > rect.x1 || rect.y0 > rect.y1) {
    throw InvalidArgument("mask rectangle outside raster");
  }
  Raster mask(width, height, 1, 0.0);
  for (std::size_t y = rect.y0; y < rect.y1; ++y) {
    for (std::size_t x = rect.x0; x < rect.x1; ++x) {
      mask.at(x, y) = 1.0;
    }
  }
  return mask;
}

fs::path raster_sidecar(const fs::path& path) {
  auto sidecar = path;
  sidecar += ".json";
  return sidecar;
}

Raster read_raster(const fs::path& path) {
  std::ifstream meta_in(raster_sidecar(path));
  if (!meta_in) {
    throw IoError("cannot open raster sidecar " + raster_sidecar(path).string());
  }
  nlohmann::json meta;
  try {
    meta_in >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("raster sidecar " + raster_sidecar(path).string() + ": " + e.what());
  }
  const auto w = meta.at("w").get<std::size_t>();
  const auto h = meta.at("h").get<std::size_t>();
  const auto c = meta.at("c").get<std::size_t>();

  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open raster " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string bytes = std::move(buffer).str();
  if (bytes.size() != w * h * c * sizeof(float)) {
    throw FormatError("raster " + path.string() + " size does not match its sidecar");
  }
  std::vector<double> values(w * h * c);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint32_t bits = 0;
    std::memcpy(&bits, bytes.data() + i * sizeof bits, sizeof bits);
    if constexpr (std::endian::native == std::endian::big) {
      bits = ((bits & 0xffU) << 24) | ((bits & 0xff00U) << 8) | ((bits >> 8) & 0xff00U) | (bits >> 24);
    }
    values[i] = static_cast<double>(std::bit_cast<float>(bits));
  }
  return Raster(w, h, c, std::move(values));
}

void write_raster(const Raster& raster, const fs::path& path) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::string bytes(raster.data().size() * sizeof(float), '\0');
  for (std::size_t i = 0; i < raster.data().size(); ++i) {
    auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(raster.data()[i]));
    if constexpr (std::endian::native == std::endian::big) {
      bits = ((bits & 0xffU) << 24) | ((bits & 0xff00U) << 8) | ((bits >> 8) & 0xff00U) | (bits >> 24);
    }
    std::memcpy(bytes.data() + i * sizeof bits, &bits, sizeof bits);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write raster " + path.string());
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));

  nlohmann::ordered_json meta;
  meta["w"] = raster.width();
  meta["h"] = raster.height();
  meta["c"] = raster.channels();
  std::ofstream meta_out(raster_sidecar(path), std::ios::trunc);
  if (!meta_out) {
    throw IoError("cannot write raster sidecar for " + path.string());
  }
  meta_out << meta.dump() << '\n';
}

}  // namespace latentlens
