#include "latentlens/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "latentlens/error.hpp"
#include "latentlens/rng.hpp"

namespace latentlens::synth {

namespace fs = std::filesystem;
using json = nlohmann::json;

void PlantedFactorSpec::validate() const {
  if (layout.empty()) {
    throw InvalidArgument("synth spec needs a layout");
  }
  if (base_mean.size() != layout.total() || base_std.size() != layout.total()) {
    throw LayoutMismatch("synth spec base_mean/base_std must match the layout");
  }
  for (std::size_t c = 0; c < layout.total(); ++c) {
    if (!std::isfinite(base_mean[c]) || !std::isfinite(base_std[c]) || base_std[c] < 0.0) {
      throw InvalidArgument("synth spec base statistics must be finite with std >= 0");
    }
  }
  if (!std::isfinite(noise_std) || noise_std < 0.0) {
    throw InvalidArgument("synth spec noise_std must be finite and >= 0");
  }
  if (raster_width == 0 || raster_height == 0) {
    throw InvalidArgument("synth spec raster must be at least 1x1");
  }
  std::set<Expression> names;
  for (const auto& f : factors) {
    if (f.name == Expression::Neutral) {
      throw InvalidArgument("synth factor cannot be named Neutral");
    }
    if (!names.insert(f.name).second) {
      throw InvalidArgument("duplicate synth factor '" + std::string(to_string(f.name)) + "'");
    }
    if (f.channels.empty()) {
      throw InvalidArgument("synth factor needs at least one planted channel");
    }
    for (const auto& ch : f.channels) {
      (void)layout.flat_index(ch);
    }
    if (!(f.effect_size > 0.0) || !std::isfinite(f.effect_size)) {
      throw InvalidArgument("synth factor effect_size must be > 0");
    }
    if (!std::isfinite(f.gain)) {
      throw InvalidArgument("synth factor gain must be finite");
    }
    const auto& r = f.region;
    if (r.x1 <= r.x0 || r.y1 <= r.y0 || r.x1 > raster_width || r.y1 > raster_height) {
      throw InvalidArgument("synth factor region must be a non-empty rectangle inside the raster");
    }
  }
}

namespace {

std::vector<double> per_channel(const json& value, std::size_t total, const char* key) {
  if (value.is_number()) {
    return std::vector<double>(total, value.get<double>());
  }
  auto values = value.get<std::vector<double>>();
  if (values.size() != total) {
    throw LayoutMismatch(std::string("synth spec ") + key + " must have one entry per channel");
  }
  return values;
}

}  // namespace

PlantedFactorSpec parse_spec(const std::string& json_text) {
  PlantedFactorSpec spec;
  try {
    const auto j = json::parse(json_text);
    spec.layout = Layout(j.at("layout").get<std::vector<std::size_t>>());
    spec.base_mean = per_channel(j.value("base_mean", json(0.0)), spec.layout.total(), "base_mean");
    spec.base_std = per_channel(j.value("base_std", json(1.0)), spec.layout.total(), "base_std");
    spec.noise_std = j.value("noise_std", 1.0);
    if (j.contains("raster")) {
      spec.raster_width = j.at("raster").at("w").get<std::size_t>();
      spec.raster_height = j.at("raster").at("h").get<std::size_t>();
    }
    spec.background = j.value("background", 0.5);
    for (const auto& jf : j.at("factors")) {
      Factor f;
      f.name = parse_expression(jf.at("name").get<std::string>());
      for (const auto& ch : jf.at("channels")) {
        f.channels.push_back({ch.at(0).get<std::size_t>(), ch.at(1).get<std::size_t>()});
      }
      f.effect_size = jf.value("effect_size", 1.0);
      f.gain = jf.value("gain", 0.1);
      const auto region = jf.at("region").get<std::vector<std::size_t>>();
      if (region.size() != 4) {
        throw FormatError("synth factor region must be [x0, y0, x1, y1]");
      }
      f.region = {region[0], region[1], region[2], region[3]};
      spec.factors.push_back(std::move(f));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("synth spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

PlantedFactorSpec load_spec(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open synth spec " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_spec(buffer.str());
}

Dataset generate_dataset(const PlantedFactorSpec& spec, std::size_t n_per_class, std::uint64_t seed) {
  spec.validate();
  if (spec.factors.empty()) {
    throw InvalidArgument("synth generation needs at least one factor");
  }
  if (n_per_class == 0) {
    throw InvalidArgument("synth generation needs n_per_class >= 1");
  }

  const std::size_t width = spec.layout.total();
  std::vector<LatentRecord> records;
  records.reserve(2 * n_per_class * spec.factors.size());
  Dataset out;

  for (std::size_t f = 0; f < spec.factors.size(); ++f) {
    const auto& factor = spec.factors[f];
    std::vector<std::size_t> planted;
    for (const auto& ch : factor.channels) {
      planted.push_back(spec.layout.flat_index(ch));
    }
    std::sort(planted.begin(), planted.end());
    planted.erase(std::unique(planted.begin(), planted.end()), planted.end());

    for (std::size_t i = 0; i < n_per_class; ++i) {
      Rng rng = Rng::derive(seed, f * n_per_class + i);
      std::vector<double> base(width);
      for (std::size_t c = 0; c < width; ++c) {
        base[c] = spec.base_mean[c] + spec.noise_std * spec.base_std[c] * rng.normal();
      }
      std::vector<double> neutral = base;
      std::vector<double> positive = base;
      for (const auto c : planted) {
        const double sd = spec.base_std[c];
        neutral[c] += spec.noise_std * sd * rng.normal();
        positive[c] += factor.effect_size * sd + spec.noise_std * sd * rng.normal();
      }

      char tag[32];
      std::snprintf(tag, sizeof tag, "f%02zu-%06zu", f, i);
      const std::string source(tag);

      LatentRecord neu;
      neu.id = source + "-neutral";
      neu.code = StyleCode(spec.layout, std::move(neutral));
      neu.expression = Expression::Neutral;
      neu.source_id = source;
      neu.origin = Origin::Still;
      records.push_back(std::move(neu));

      LatentRecord pos;
      pos.id = source + "-" + std::string(to_string(factor.name));
      pos.code = StyleCode(spec.layout, std::move(positive));
      pos.expression = factor.name;
      pos.source_id = source;
      pos.origin = Origin::Transferred;
      records.push_back(std::move(pos));
    }

    GroundTruth truth;
    truth.name = factor.name;
    truth.channels = factor.channels;
    truth.direction.assign(width, 0.0);
    double norm2 = 0.0;
    for (const auto c : planted) {
      truth.direction[c] = factor.effect_size * spec.base_std[c];
      norm2 += truth.direction[c] * truth.direction[c];
    }
    const double norm = std::sqrt(norm2);
    if (norm > 0.0) {
      for (auto& v : truth.direction) {
        v /= norm;
      }
    }
    out.truth.push_back(std::move(truth));
  }
  out.archive = LatentArchive(spec.layout, std::move(records));
  return out;
}

void write_dataset(const Dataset& data, const fs::path& dir) {
  write_archive(data.archive, dir);
  nlohmann::ordered_json root;
  root["layout"] = data.archive.layout().counts();
  auto& factors = root["factors"] = nlohmann::ordered_json::array();
  for (const auto& t : data.truth) {
    nlohmann::ordered_json jf;
    jf["name"] = std::string(to_string(t.name));
    auto channels = nlohmann::ordered_json::array();
    auto weights = nlohmann::ordered_json::array();
    for (const auto& ch : t.channels) {
      channels.push_back({ch.layer, ch.channel});
      weights.push_back(t.direction[data.archive.layout().flat_index(ch)]);
    }
    jf["channels"] = std::move(channels);
    jf["weights"] = std::move(weights);
    factors.push_back(std::move(jf));
  }
  std::ofstream out(dir / "ground_truth.json", std::ios::trunc);
  if (!out) {
    throw IoError("cannot write ground_truth.json in " + dir.string());
  }
  out << root.dump(2) << '\n';
}

Raster render(const StyleCode& code, const PlantedFactorSpec& spec) {
  require_same_layout(code.layout(), spec.layout, "synth render");
  Raster raster(spec.raster_width, spec.raster_height, 1, spec.background);
  for (const auto& factor : spec.factors) {
    double mean = 0.0;
    for (const auto& ch : factor.channels) {
      mean += code.at(ch.layer, ch.channel);
    }
    mean /= static_cast<double>(factor.channels.size());
    const double delta = factor.gain * mean;
    for (std::size_t y = factor.region.y0; y < factor.region.y1; ++y) {
      for (std::size_t x = factor.region.x0; x < factor.region.x1; ++x) {
        raster.at(x, y) += delta;
      }
    }
  }
  return raster;
}

}  // namespace latentlens::synth
