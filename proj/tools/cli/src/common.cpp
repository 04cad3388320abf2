#include "common.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "latentlens/error.hpp"

namespace latentlens::cli {

void ensure_writable(const fs::path& path, const Globals& g) {
  if (g.force || !fs::exists(path)) {
    return;
  }
  if (fs::is_directory(path) && fs::is_empty(path)) {
    return;
  }
  throw IoError("refusing to overwrite " + path.string() + " (pass --force)");
}

void write_text(const fs::path& path, const std::string& text, const Globals& g) {
  ensure_writable(path, g);
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  info(g, "wrote " + path.string());
}

void write_json(const fs::path& path, const ojson& value, const Globals& g) {
  write_text(path, value.dump(2) + "\n", g);
}

void write_archive_dir(const LatentArchive& archive, const fs::path& dir, const Globals& g) {
  ensure_writable(dir, g);
  write_archive(archive, dir);
  info(g, "wrote archive " + dir.string() + " (" + std::to_string(archive.size()) + " records)");
}

void info(const Globals& g, const std::string& message) {
  if (!g.quiet) {
    std::cerr << message << '\n';
  }
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<nlohmann::json> read_jsonl(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::vector<nlohmann::json> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      rows.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b != std::string::npos) {
      out.push_back(item.substr(b, e - b + 1));
    }
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) {
      throw UsageError("not a number: '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<std::size_t> parse_counts(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text)) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("not a count: '" + item + "'");
    }
    out.push_back(std::stoull(item));
  }
  return out;
}

std::vector<Expression> parse_expressions(const std::string& text) {
  std::vector<Expression> out;
  for (const auto& item : split_list(text)) {
    out.push_back(parse_expression(item));
  }
  return out;
}

bool LabelFilter::matches(const LatentRecord& r) const {
  if (key == "expression") {
    return r.expression && to_string(*r.expression) == value;
  }
  if (key == "species") {
    return r.species && to_string(*r.species) == value;
  }
  if (key == "sex") {
    return r.sex && to_string(*r.sex) == value;
  }
  if (key == "split") {
    return to_string(r.split) == value;
  }
  if (key == "origin") {
    return to_string(r.origin) == value;
  }
  if (key == "source_id") {
    return r.source_id && *r.source_id == value;
  }
  return r.id == value;
}

LabelFilter parse_label_filter(const std::string& text) {
  static const std::set<std::string> keys = {"expression", "species", "sex", "split", "origin", "source_id", "id"};
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw UsageError("expected key=value, got '" + text + "'");
  }
  LabelFilter f{text.substr(0, eq), text.substr(eq + 1)};
  if (!keys.contains(f.key)) {
    throw UsageError("unknown label key '" + f.key + "'");
  }
  // Validate the value against the label vocabulary.
  if (f.key == "expression") {
    parse_expression(f.value);
  } else if (f.key == "species") {
    parse_species(f.value);
  } else if (f.key == "sex") {
    parse_sex(f.value);
  } else if (f.key == "split") {
    parse_split(f.value);
  } else if (f.key == "origin") {
    parse_origin(f.value);
  }
  return f;
}

std::vector<std::size_t> selection_rows(const LatentArchive& archive, const std::string& selection_path) {
  std::vector<std::size_t> rows;
  if (selection_path.empty()) {
    rows.resize(archive.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      rows[i] = i;
    }
    return rows;
  }
  const auto sel = read_json(selection_path);
  if (!sel.contains("ids") || !sel["ids"].is_array()) {
    throw FormatError(selection_path + ": missing \"ids\" array");
  }
  for (const auto& id : sel["ids"]) {
    rows.push_back(archive.index_of(id.get<std::string>()));
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

ojson layout_json(const Layout& layout) { return ojson(layout.counts()); }

Layout layout_from_json(const nlohmann::json& j) { return Layout(j.get<std::vector<std::size_t>>()); }

ojson boundary_json(const editing::AttributeBoundary& b) {
  ojson j;
  j["attribute"] = b.attribute;
  j["space"] = b.space;
  j["layout"] = layout_json(b.layout);
  j["normal"] = b.normal;
  j["offset"] = b.offset;
  j["diagnostics"] = {{"iterations", b.diagnostics.iterations},
                      {"final_loss", b.diagnostics.final_loss},
                      {"train_accuracy", b.diagnostics.train_accuracy},
                      {"gradient_norm", b.diagnostics.gradient_norm},
                      {"converged", b.diagnostics.converged}};
  return j;
}

editing::AttributeBoundary boundary_from_json(const nlohmann::json& j) {
  try {
    editing::AttributeBoundary b;
    b.attribute = j.at("attribute").get<std::string>();
    b.space = j.value("space", "archive");
    b.layout = layout_from_json(j.at("layout"));
    b.normal = j.at("normal").get<std::vector<double>>();
    b.offset = j.at("offset").get<double>();
    if (j.contains("diagnostics")) {
      const auto& d = j["diagnostics"];
      b.diagnostics.iterations = d.value("iterations", std::size_t{0});
      b.diagnostics.final_loss = d.value("final_loss", 0.0);
      b.diagnostics.train_accuracy = d.value("train_accuracy", 0.0);
      b.diagnostics.gradient_norm = d.value("gradient_norm", 0.0);
      b.diagnostics.converged = d.value("converged", false);
    }
    if (b.normal.size() != b.layout.total()) {
      throw FormatError("boundary normal length does not match its layout");
    }
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("boundary: ") + e.what());
  }
}

ojson relevance_json(const stylespace::ChannelRelevance& r, std::size_t pairs) {
  ojson j;
  j["expression"] = std::string(to_string(r.expression));
  j["pairs"] = pairs;
  j["layout"] = layout_json(r.layout);
  j["theta"] = r.theta;
  j["mu"] = r.mu;
  j["sigma"] = r.sigma;
  return j;
}

stylespace::ChannelRelevance relevance_from_json(const nlohmann::json& j) {
  try {
    stylespace::ChannelRelevance r;
    r.expression = parse_expression(j.at("expression").get<std::string>());
    r.layout = layout_from_json(j.at("layout"));
    r.theta = j.at("theta").get<std::vector<double>>();
    r.mu = j.value("mu", std::vector<double>{});
    r.sigma = j.value("sigma", std::vector<double>{});
    if (r.theta.size() != r.layout.total()) {
      throw FormatError("relevance theta length does not match its layout");
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("relevance: ") + e.what());
  }
}

ojson axis_json(const stylespace::MotionAxis& axis, const stylespace::AxisScore& score) {
  ojson j;
  j["name"] = axis.name;
  j["layout"] = layout_json(axis.layout);
  j["k"] = axis.k;
  j["excluded_layers"] = axis.excluded_layers;
  auto names = [](const std::vector<Expression>& v) {
    ojson a = ojson::array();
    for (const auto e : v) {
      a.push_back(std::string(to_string(e)));
    }
    return a;
  };
  j["positive"] = names(score.positive);
  j["negative"] = names(score.negative);
  auto& top = j["top"] = ojson::array();
  for (const auto& c : axis.top) {
    top.push_back({{"layer", c.layer}, {"channel", c.channel}, {"score", c.score}, {"rank", c.rank}});
  }
  return j;
}

stylespace::MotionAxis axis_from_json(const nlohmann::json& j) {
  try {
    stylespace::MotionAxis axis;
    axis.name = j.value("name", "");
    axis.layout = layout_from_json(j.at("layout"));
    axis.k = j.at("k").get<std::size_t>();
    axis.excluded_layers = j.value("excluded_layers", std::set<std::size_t>{});
    for (const auto& c : j.at("top")) {
      stylespace::RankedChannel rc;
      rc.layer = c.at("layer").get<std::size_t>();
      rc.channel = c.at("channel").get<std::size_t>();
      rc.score = c.value("score", 0.0);
      rc.rank = c.value("rank", axis.top.size() + 1);
      axis.layout.flat_index(rc.layer, rc.channel);  // bounds check
      axis.top.push_back(rc);
    }
    if (axis.top.empty()) {
      throw FormatError("axis has no channels");
    }
    return axis;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("axis: ") + e.what());
  }
}

}  // namespace latentlens::cli
