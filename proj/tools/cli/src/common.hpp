#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "latentlens/archive.hpp"
#include "latentlens/editing.hpp"
#include "latentlens/stylespace.hpp"

namespace latentlens::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

inline constexpr std::uint64_t kDefaultSeed = 0;

struct Globals {
  std::uint64_t seed = kDefaultSeed;
  bool force = false;
  bool quiet = false;
};

/// Bad flag combination found after parsing; exits 2 like a parse error.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Output files and directories are never replaced without --force.
void ensure_writable(const fs::path& path, const Globals& g);
void write_text(const fs::path& path, const std::string& text, const Globals& g);
void write_json(const fs::path& path, const ojson& value, const Globals& g);
void write_archive_dir(const LatentArchive& archive, const fs::path& dir, const Globals& g);
void info(const Globals& g, const std::string& message);

nlohmann::json read_json(const fs::path& path);
/// One JSON value per non-blank line.
std::vector<nlohmann::json> read_jsonl(const fs::path& path);

std::vector<std::string> split_list(const std::string& text, char sep = ',');
std::vector<double> parse_doubles(const std::string& text);
std::vector<std::size_t> parse_counts(const std::string& text);
std::vector<Expression> parse_expressions(const std::string& text);

/// `key=value` record selector over expression, species, sex, split, origin,
/// source_id or id.
struct LabelFilter {
  std::string key;
  std::string value;

  bool matches(const LatentRecord& record) const;
};
LabelFilter parse_label_filter(const std::string& text);

/// Rows of `archive` restricted to the ids in a selection.json, or every row.
std::vector<std::size_t> selection_rows(const LatentArchive& archive, const std::string& selection_path);

ojson layout_json(const Layout& layout);
Layout layout_from_json(const nlohmann::json& j);

ojson boundary_json(const editing::AttributeBoundary& b);
editing::AttributeBoundary boundary_from_json(const nlohmann::json& j);

ojson relevance_json(const stylespace::ChannelRelevance& r, std::size_t pairs);
stylespace::ChannelRelevance relevance_from_json(const nlohmann::json& j);

ojson axis_json(const stylespace::MotionAxis& axis, const stylespace::AxisScore& score);
stylespace::MotionAxis axis_from_json(const nlohmann::json& j);

// Per-subcommand registration; callbacks run after parsing and read `g`.
void register_synth(CLI::App& root, const Globals& g);
void register_curate(CLI::App& root, const Globals& g);
void register_edit(CLI::App& root, const Globals& g);
void register_space(CLI::App& root, const Globals& g);
void register_metrics(CLI::App& root, const Globals& g);

}  // namespace latentlens::cli
