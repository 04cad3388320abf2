#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "latentlens/record.hpp"
#include "latentlens/style_code.hpp"

namespace latentlens {

/// Immutable collection of records sharing one layout, with unique ids.
///
/// On disk an archive is a directory with three files:
///   manifest.json  {"version":1,"count":N,"layout":[c0,c1,...],"dtype":"f32le"}
///   codes.bin      N x sum(layout) IEEE-754 binary32 little-endian, row-major,
///                  no header, no padding
///   labels.jsonl   one object per record in row order with keys id,
///                  expression, species, sex, age, yaw_deg, split, source_id,
///                  origin; absent attributes are null
class LatentArchive {
 public:
  LatentArchive() = default;
  LatentArchive(Layout layout, std::vector<LatentRecord> records);

  const Layout& layout() const noexcept { return layout_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  std::span<const LatentRecord> records() const noexcept { return records_; }
  const LatentRecord& operator[](std::size_t i) const { return records_.at(i); }

  std::optional<std::size_t> find(const std::string& id) const;
  /// Like find() but throws InvalidArgument for unknown ids.
  std::size_t index_of(const std::string& id) const;

  /// Codes as a dense matrix (one row per record, archive order).
  PointMatrix code_matrix() const;
  PointMatrix code_matrix(std::span<const std::size_t> indices) const;

  /// New archive with the records at `indices`, in that order.
  LatentArchive subset(std::span<const std::size_t> indices) const;

 private:
  Layout layout_;
  std::vector<LatentRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline constexpr int kArchiveFormatVersion = 1;

LatentArchive load_archive(const std::filesystem::path& dir);

/// Writes the three archive files into `dir` (created if missing). Output
/// bytes depend only on the archive contents. Values are narrowed to binary32.
void write_archive(const LatentArchive& archive, const std::filesystem::path& dir);

/// Per-channel mean and population standard deviation (divide by N).
struct PopulationStats {
  Layout layout;
  std::vector<double> mean;
  std::vector<double> std;
};

/// Requires at least two records.
PopulationStats population_stats(const LatentArchive& archive);
PopulationStats population_stats(const Layout& layout, const PointMatrix& codes);

}  // namespace latentlens
