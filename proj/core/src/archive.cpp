#include "latentlens/archive.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "latentlens/error.hpp"

namespace latentlens {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

LatentArchive::LatentArchive(Layout layout, std::vector<LatentRecord> records)
    : layout_(std::move(layout)), records_(std::move(records)) {
  if (layout_.empty()) {
    throw InvalidArgument("archive layout must have at least one layer");
  }
  index_.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& rec = records_[i];
    rec.validate();
    require_same_layout(rec.code.layout(), layout_, ("record '" + rec.id + "'").c_str());
    if (!index_.emplace(rec.id, i).second) {
      throw InvalidArgument("duplicate record id '" + rec.id + "'");
    }
  }
}

std::optional<std::size_t> LatentArchive::find(const std::string& id) const {
  if (const auto it = index_.find(id); it != index_.end()) {
    return it->second;
  }
  return std::nullopt;
}

std::size_t LatentArchive::index_of(const std::string& id) const {
  if (const auto found = find(id)) {
    return *found;
  }
  throw InvalidArgument("unknown record id '" + id + "'");
}

PointMatrix LatentArchive::code_matrix() const {
  PointMatrix out(records_.size(), layout_.total());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto src = records_[i].code.flat();
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

PointMatrix LatentArchive::code_matrix(std::span<const std::size_t> indices) const {
  PointMatrix out(indices.size(), layout_.total());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = records_.at(indices[i]).code.flat();
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

LatentArchive LatentArchive::subset(std::span<const std::size_t> indices) const {
  std::vector<LatentRecord> picked;
  picked.reserve(indices.size());
  for (const auto i : indices) {
    picked.push_back(records_.at(i));
  }
  return LatentArchive(layout_, std::move(picked));
}

namespace {

template <typename T>
ordered_json optional_json(const std::optional<T>& value) {
  if (!value) {
    return nullptr;
  }
  if constexpr (std::is_enum_v<T>) {
    return std::string(to_string(*value));
  } else {
    return *value;
  }
}

ordered_json label_json(const LatentRecord& rec) {
  ordered_json j;
  j["id"] = rec.id;
  j["expression"] = optional_json(rec.expression);
  j["species"] = optional_json(rec.species);
  j["sex"] = optional_json(rec.sex);
  j["age"] = optional_json(rec.age);
  j["yaw_deg"] = optional_json(rec.yaw_deg);
  j["split"] = std::string(to_string(rec.split));
  j["source_id"] = optional_json(rec.source_id);
  j["origin"] = std::string(to_string(rec.origin));
  return j;
}

template <typename Parse>
auto optional_enum(const ordered_json& j, const char* key, Parse parse)
    -> std::optional<decltype(parse(std::string_view{}))> {
  if (!j.contains(key) || j.at(key).is_null()) {
    return std::nullopt;
  }
  return parse(j.at(key).get<std::string>());
}

std::optional<double> optional_number(const ordered_json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) {
    return std::nullopt;
  }
  if (!j.at(key).is_number()) {
    throw FormatError(std::string("label '") + key + "' must be a number or null");
  }
  return j.at(key).get<double>();
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

std::uint32_t to_little_endian(std::uint32_t v) noexcept {
  if constexpr (std::endian::native == std::endian::big) {
    return ((v & 0xffU) << 24) | ((v & 0xff00U) << 8) | ((v >> 8) & 0xff00U) | (v >> 24);
  }
  return v;
}

}  // namespace

void write_archive(const LatentArchive& archive, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  }

  ordered_json manifest;
  manifest["version"] = kArchiveFormatVersion;
  manifest["count"] = static_cast<std::uint64_t>(archive.size());
  manifest["layout"] = archive.layout().counts();
  manifest["dtype"] = "f32le";
  write_file(dir / "manifest.json", manifest.dump() + "\n");

  const std::size_t width = archive.layout().total();
  std::string codes(archive.size() * width * sizeof(std::uint32_t), '\0');
  char* cursor = codes.data();
  for (const auto& rec : archive.records()) {
    for (const double v : rec.code.flat()) {
      const auto bits = to_little_endian(std::bit_cast<std::uint32_t>(static_cast<float>(v)));
      std::memcpy(cursor, &bits, sizeof bits);
      cursor += sizeof bits;
    }
  }
  write_file(dir / "codes.bin", codes);

  std::string labels;
  for (const auto& rec : archive.records()) {
    labels += label_json(rec).dump();
    labels += '\n';
  }
  write_file(dir / "labels.jsonl", labels);
}

LatentArchive load_archive(const fs::path& dir) {
  for (const char* name : {"manifest.json", "codes.bin", "labels.jsonl"}) {
    if (!fs::exists(dir / name)) {
      throw IoError("archive " + dir.string() + " is missing " + name);
    }
  }

  ordered_json manifest;
  try {
    manifest = ordered_json::parse(read_file(dir / "manifest.json"));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("manifest.json: " + std::string(e.what()));
  }
  if (manifest.value("version", 0) != kArchiveFormatVersion) {
    throw FormatError("manifest.json: unsupported version");
  }
  if (manifest.value("dtype", std::string{}) != "f32le") {
    throw FormatError("manifest.json: dtype must be f32le");
  }
  if (!manifest.contains("count") || !manifest.contains("layout")) {
    throw FormatError("manifest.json: count and layout are required");
  }
  const auto count = manifest.at("count").get<std::uint64_t>();
  Layout layout(manifest.at("layout").get<std::vector<std::size_t>>());

  const std::string codes = read_file(dir / "codes.bin");
  const std::size_t width = layout.total();
  const std::size_t expected = count * width * sizeof(std::uint32_t);
  if (codes.size() != expected) {
    throw FormatError("codes.bin holds " + std::to_string(codes.size()) + " bytes, manifest implies " +
                      std::to_string(expected));
  }

  std::vector<LatentRecord> records;
  records.reserve(count);
  std::istringstream lines(read_file(dir / "labels.jsonl"));
  std::string line;
  const char* cursor = codes.data();
  while (std::getline(lines, line)) {
    if (line.empty()) {
      continue;
    }
    if (records.size() == count) {
      throw FormatError("labels.jsonl has more rows than manifest count");
    }
    LatentRecord rec;
    try {
      const auto j = ordered_json::parse(line);
      rec.id = j.at("id").get<std::string>();
      rec.expression = optional_enum(j, "expression", parse_expression);
      rec.species = optional_enum(j, "species", parse_species);
      rec.sex = optional_enum(j, "sex", parse_sex);
      rec.age = optional_number(j, "age");
      rec.yaw_deg = optional_number(j, "yaw_deg");
      rec.split = parse_split(j.at("split").get<std::string>());
      if (j.contains("source_id") && !j.at("source_id").is_null()) {
        rec.source_id = j.at("source_id").get<std::string>();
      }
      rec.origin = parse_origin(j.at("origin").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("labels.jsonl row " + std::to_string(records.size()) + ": " + e.what());
    }

    std::vector<double> values(width);
    for (auto& v : values) {
      std::uint32_t bits = 0;
      std::memcpy(&bits, cursor, sizeof bits);
      cursor += sizeof bits;
      v = static_cast<double>(std::bit_cast<float>(to_little_endian(bits)));
      if (!std::isfinite(v)) {
        throw FormatError("codes.bin row " + std::to_string(records.size()) + " has a non-finite value");
      }
    }
    rec.code = StyleCode(layout, std::move(values));
    records.push_back(std::move(rec));
  }
  if (records.size() != count) {
    throw FormatError("labels.jsonl has " + std::to_string(records.size()) + " rows, manifest count is " +
                      std::to_string(count));
  }
  return LatentArchive(std::move(layout), std::move(records));
}

namespace {

template <typename RowAt>
PopulationStats compute_stats(const Layout& layout, std::size_t n, RowAt row_at) {
  if (n < 2) {
    throw InvalidArgument("population statistics need at least 2 records");
  }
  const std::size_t width = layout.total();
  PopulationStats stats{layout, std::vector<double>(width, 0.0), std::vector<double>(width, 0.0)};
  std::vector<double> lo(row_at(0).begin(), row_at(0).end());
  std::vector<double> hi = lo;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = row_at(i);
    for (std::size_t c = 0; c < width; ++c) {
      stats.mean[c] += row[c];
      lo[c] = std::min(lo[c], row[c]);
      hi[c] = std::max(hi[c], row[c]);
    }
  }
  for (auto& m : stats.mean) {
    m /= static_cast<double>(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = row_at(i);
    for (std::size_t c = 0; c < width; ++c) {
      const double d = row[c] - stats.mean[c];
      stats.std[c] += d * d;
    }
  }
  for (std::size_t c = 0; c < width; ++c) {
    if (lo[c] == hi[c]) {
      // Constant channel: report it exactly rather than with summation residue.
      stats.mean[c] = lo[c];
      stats.std[c] = 0.0;
    } else {
      stats.std[c] = std::sqrt(stats.std[c] / static_cast<double>(n));
    }
  }
  return stats;
}

}  // namespace

PopulationStats population_stats(const Layout& layout, const PointMatrix& codes) {
  if (codes.cols() != layout.total()) {
    throw LayoutMismatch("population statistics: code width does not match layout");
  }
  return compute_stats(layout, codes.rows(), [&](std::size_t i) { return codes.row(i); });
}

PopulationStats population_stats(const LatentArchive& archive) {
  const auto records = archive.records();
  return compute_stats(archive.layout(), records.size(),
                       [&](std::size_t i) { return records[i].code.flat(); });
}

}  // namespace latentlens
