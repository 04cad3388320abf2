#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "latentlens/archive.hpp"
#include "latentlens/raster.hpp"
#include "latentlens/record.hpp"
#include "latentlens/style_code.hpp"

namespace latentlens::synth {

/// One planted factor: shifting `channels` by effect_size * base_std moves
/// the pixels of `region` in the rendered raster.
struct Factor {
  Expression name = Expression::Neutral;
  std::vector<ChannelRef> channels;
  double effect_size = 1.0;  // multiples of the channel's base_std
  PixelRect region;
  double gain = 0.1;  // pixel change per unit of mean planted-channel value
};

/// Generator specification. base_std is each channel's unit: effect sizes and
/// noise are multiples of it. With noise_std = 0 every record of a class is
/// the same point.
struct PlantedFactorSpec {
  Layout layout;
  std::vector<double> base_mean;
  std::vector<double> base_std;
  std::vector<Factor> factors;
  double noise_std = 1.0;  // multiples of base_std
  std::size_t raster_width = 64;
  std::size_t raster_height = 64;
  double background = 0.5;

  /// Throws InvalidArgument when an invariant fails.
  void validate() const;
};

/// Reads the JSON form:
/// {"layout":[..], "base_mean":0.0 | [..], "base_std":1.0 | [..], "noise_std":1.0,
///  "raster":{"w":64,"h":64}, "background":0.5,
///  "factors":[{"name":"Scream","channels":[[1,3]],"effect_size":2.0,
///              "region":[x0,y0,x1,y1],"gain":0.1}]}
PlantedFactorSpec load_spec(const std::filesystem::path& path);
PlantedFactorSpec parse_spec(const std::string& json_text);

struct GroundTruth {
  Expression name = Expression::Neutral;
  std::vector<ChannelRef> channels;
  /// Unit vector over the flattened code, supported on the planted channels.
  std::vector<double> direction;
};

struct Dataset {
  LatentArchive archive;
  std::vector<GroundTruth> truth;
};

/// For every factor emits n_per_class matched pairs: a neutral record and a
/// positive record labelled with the factor name. A pair shares one base
/// draw base_mean + noise_std * base_std * N(0,1) on every channel; on
/// planted channels the positive adds
/// effect_size * base_std, and each member adds its own independent
/// noise_std * base_std * N(0,1). Pair i of factor f draws from
/// Rng::derive(seed, f * n_per_class + i).
Dataset generate_dataset(const PlantedFactorSpec& spec, std::size_t n_per_class, std::uint64_t seed);

/// Writes the archive plus ground_truth.json into `dir`.
void write_dataset(const Dataset& data, const std::filesystem::path& dir);

/// Single-channel raster: background everywhere, plus, inside each factor's
/// region, gain * mean(code at the factor's planted channels).
Raster render(const StyleCode& code, const PlantedFactorSpec& spec);

}  // namespace latentlens::synth
