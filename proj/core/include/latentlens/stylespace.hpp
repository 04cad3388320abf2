#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "latentlens/archive.hpp"
#include "latentlens/record.hpp"
#include "latentlens/style_code.hpp"

namespace latentlens::stylespace {

/// Floor for standard deviations in normalisation and relevance ratios.
inline constexpr double kSigmaFloor = 1e-8;
/// Upper cap on channel relevance.
inline constexpr double kRelevanceCap = 1e8;

enum class Normalization {
  Standardize,  // (s - mean) / max(std, floor)
  MeanOnly,     // s - mean
};

std::vector<double> normalize_style(const StyleCode& code, const PopulationStats& pop,
                                    Normalization mode = Normalization::Standardize);
StyleCode denormalize_style(std::span<const double> normalized, const PopulationStats& pop,
                            Normalization mode = Normalization::Standardize);

/// Normalised movement-minus-neutral differences for one expression.
struct DifferentialSet {
  Expression expression = Expression::Neutral;
  Layout layout;
  std::vector<std::vector<double>> deltas;
  std::vector<std::pair<std::string, std::string>> pair_ids;  // (movement id, neutral id)
};

/// Pairs every record labelled `movement` with the record labelled `neutral`
/// that shares its source_id. Unpaired or ambiguously paired movement
/// records are errors. Requires at least two pairs.
DifferentialSet differential_set(const LatentArchive& archive, Expression movement, const PopulationStats& pop,
                                 Expression neutral = Expression::Neutral,
                                 Normalization mode = Normalization::Standardize);

/// Builds a set from explicit (movement, neutral) code pairs.
DifferentialSet differential_set(Expression movement, std::span<const std::pair<StyleCode, StyleCode>> pairs,
                                 const PopulationStats& pop, Normalization mode = Normalization::Standardize);

/// Per-channel relevance theta = |mean(delta)| / max(std(delta), floor),
/// capped at kRelevanceCap. std divides by the number of deltas.
struct ChannelRelevance {
  Expression expression = Expression::Neutral;
  Layout layout;
  std::vector<double> theta;
  std::vector<double> mu;
  std::vector<double> sigma;
};

ChannelRelevance channel_relevance(const DifferentialSet& deltas);

/// theta_r = mean of theta over positive expressions minus mean over
/// negative expressions, per channel.
struct AxisScore {
  Layout layout;
  std::vector<double> theta_r;
  std::vector<Expression> positive;
  std::vector<Expression> negative;

  std::size_t n_positive() const noexcept { return positive.size(); }
  std::size_t n_negative() const noexcept { return negative.size(); }
};

struct AxisOptions {
  /// Skips the disjointness check (lets a test put one set on both sides).
  bool allow_overlap = false;
};

AxisScore axis_score(const std::map<Expression, ChannelRelevance>& relevances, std::span<const Expression> positive,
                     std::span<const Expression> negative, const AxisOptions& options = {});

struct RankedChannel {
  std::size_t layer = 0;
  std::size_t channel = 0;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based
};

struct MotionAxis {
  std::string name;
  Layout layout;
  std::size_t k = 0;
  std::set<std::size_t> excluded_layers;
  std::vector<RankedChannel> top;
};

inline constexpr std::size_t kDefaultTopK = 5;
inline const std::set<std::size_t> kDefaultExcludedLayers = {0};

/// k highest scores outside the excluded layers; ties go to the smaller
/// (layer, channel).
MotionAxis top_k_channels(const Layout& layout, std::span<const double> scores, std::size_t k = kDefaultTopK,
                          const std::set<std::size_t>& excluded_layers = kDefaultExcludedLayers,
                          std::string name = {});
MotionAxis top_k_channels(const AxisScore& axis, std::size_t k = kDefaultTopK,
                          const std::set<std::size_t>& excluded_layers = kDefaultExcludedLayers,
                          std::string name = {});

/// Mean normalised value over the axis channels, one scalar per code.
std::vector<double> axis_projection(std::span<const StyleCode> codes, const MotionAxis& axis,
                                    const PopulationStats& pop, Normalization mode = Normalization::Standardize);
double axis_projection(const StyleCode& code, const MotionAxis& axis, const PopulationStats& pop,
                       Normalization mode = Normalization::Standardize);

/// Category sets for the mouth-opening and eye-closing motions.
struct AxisDefinition {
  std::string name;
  std::vector<Expression> positive;
  std::vector<Expression> negative;
};
AxisDefinition mouth_opening_axis();
AxisDefinition eye_closing_axis();

}  // namespace latentlens::stylespace
