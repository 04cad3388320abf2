#include "latentlens/stylespace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "latentlens/error.hpp"

namespace latentlens::stylespace {

namespace {

double divisor(const PopulationStats& pop, std::size_t c, Normalization mode) noexcept {
  return mode == Normalization::Standardize ? std::max(pop.std[c], kSigmaFloor) : 1.0;
}

double normalize_value(double value, const PopulationStats& pop, std::size_t c, Normalization mode) noexcept {
  return (value - pop.mean[c]) / divisor(pop, c, mode);
}

}  // namespace

std::vector<double> normalize_style(const StyleCode& code, const PopulationStats& pop, Normalization mode) {
  require_same_layout(code.layout(), pop.layout, "normalize");
  std::vector<double> out(code.size());
  for (std::size_t c = 0; c < out.size(); ++c) {
    out[c] = normalize_value(code[c], pop, c, mode);
  }
  return out;
}

StyleCode denormalize_style(std::span<const double> normalized, const PopulationStats& pop, Normalization mode) {
  if (normalized.size() != pop.layout.total()) {
    throw LayoutMismatch("denormalize: vector length does not match layout");
  }
  std::vector<double> out(normalized.size());
  for (std::size_t c = 0; c < out.size(); ++c) {
    out[c] = normalized[c] * divisor(pop, c, mode) + pop.mean[c];
  }
  return StyleCode(pop.layout, std::move(out));
}

DifferentialSet differential_set(Expression movement, std::span<const std::pair<StyleCode, StyleCode>> pairs,
                                 const PopulationStats& pop, Normalization mode) {
  if (pairs.size() < 2) {
    throw InvalidArgument("a differential set needs at least 2 movement/neutral pairs");
  }
  DifferentialSet out;
  out.expression = movement;
  out.layout = pop.layout;
  out.deltas.reserve(pairs.size());
  for (const auto& [moving, still] : pairs) {
    auto delta = normalize_style(moving, pop, mode);
    const auto base = normalize_style(still, pop, mode);
    for (std::size_t c = 0; c < delta.size(); ++c) {
      delta[c] -= base[c];
    }
    out.deltas.push_back(std::move(delta));
  }
  return out;
}

DifferentialSet differential_set(const LatentArchive& archive, Expression movement, const PopulationStats& pop,
                                 Expression neutral, Normalization mode) {
  require_same_layout(archive.layout(), pop.layout, "differential set");
  if (movement == neutral) {
    throw InvalidArgument("movement and neutral labels must differ");
  }
  std::unordered_map<std::string, std::vector<std::size_t>> neutrals;
  for (std::size_t i = 0; i < archive.size(); ++i) {
    const auto& rec = archive[i];
    if (rec.expression == neutral && rec.source_id) {
      neutrals[*rec.source_id].push_back(i);
    }
  }

  std::vector<std::pair<StyleCode, StyleCode>> pairs;
  std::vector<std::pair<std::string, std::string>> ids;
  for (const auto& rec : archive.records()) {
    if (rec.expression != movement) {
      continue;
    }
    if (!rec.source_id) {
      throw InvalidArgument("movement record '" + rec.id + "' has no source_id to pair on");
    }
    const auto it = neutrals.find(*rec.source_id);
    if (it == neutrals.end()) {
      throw InvalidArgument("movement record '" + rec.id + "' has no neutral record with source '" +
                            *rec.source_id + "'");
    }
    if (it->second.size() != 1) {
      throw InvalidArgument("source '" + *rec.source_id + "' has more than one neutral record");
    }
    const auto& base = archive[it->second.front()];
    pairs.emplace_back(rec.code, base.code);
    ids.emplace_back(rec.id, base.id);
  }
  if (pairs.size() < 2) {
    throw InvalidArgument("expression '" + std::string(to_string(movement)) + "' has " +
                          std::to_string(pairs.size()) + " paired records; at least 2 are needed");
  }
  auto out = differential_set(movement, pairs, pop, mode);
  out.pair_ids = std::move(ids);
  return out;
}

ChannelRelevance channel_relevance(const DifferentialSet& set) {
  if (set.deltas.size() < 2) {
    throw InvalidArgument("channel relevance needs at least 2 deltas");
  }
  const std::size_t width = set.layout.total();
  const double n = static_cast<double>(set.deltas.size());
  ChannelRelevance out;
  out.expression = set.expression;
  out.layout = set.layout;
  out.mu.assign(width, 0.0);
  out.sigma.assign(width, 0.0);
  out.theta.assign(width, 0.0);
  for (const auto& delta : set.deltas) {
    if (delta.size() != width) {
      throw LayoutMismatch("differential vectors must share the layout");
    }
    for (std::size_t c = 0; c < width; ++c) {
      out.mu[c] += delta[c];
    }
  }
  for (auto& m : out.mu) {
    m /= n;
  }
  for (const auto& delta : set.deltas) {
    for (std::size_t c = 0; c < width; ++c) {
      const double d = delta[c] - out.mu[c];
      out.sigma[c] += d * d;
    }
  }
  for (std::size_t c = 0; c < width; ++c) {
    out.sigma[c] = std::sqrt(out.sigma[c] / n);
    out.theta[c] = std::min(std::abs(out.mu[c]) / std::max(out.sigma[c], kSigmaFloor), kRelevanceCap);
  }
  return out;
}

AxisScore axis_score(const std::map<Expression, ChannelRelevance>& relevances, std::span<const Expression> positive,
                     std::span<const Expression> negative, const AxisOptions& options) {
  if (positive.empty() || negative.empty()) {
    throw InvalidArgument("axis score needs at least one positive and one negative expression");
  }
  if (!options.allow_overlap) {
    for (const auto e : positive) {
      if (std::find(negative.begin(), negative.end(), e) != negative.end()) {
        throw InvalidArgument("expression '" + std::string(to_string(e)) + "' is both positive and negative");
      }
    }
  }
  const auto lookup = [&](Expression e) -> const ChannelRelevance& {
    const auto it = relevances.find(e);
    if (it == relevances.end()) {
      throw InvalidArgument("no channel relevance for expression '" + std::string(to_string(e)) + "'");
    }
    return it->second;
  };
  const Layout& layout = lookup(positive.front()).layout;
  const auto mean_theta = [&](std::span<const Expression> set) {
    std::vector<double> sum(layout.total(), 0.0);
    for (const auto e : set) {
      const auto& rel = lookup(e);
      require_same_layout(rel.layout, layout, "axis score");
      for (std::size_t c = 0; c < sum.size(); ++c) {
        sum[c] += rel.theta[c];
      }
    }
    for (auto& s : sum) {
      s /= static_cast<double>(set.size());
    }
    return sum;
  };

  AxisScore out;
  out.layout = layout;
  out.positive.assign(positive.begin(), positive.end());
  out.negative.assign(negative.begin(), negative.end());
  const auto pos = mean_theta(positive);
  const auto neg = mean_theta(negative);
  out.theta_r.resize(pos.size());
  for (std::size_t c = 0; c < pos.size(); ++c) {
    out.theta_r[c] = pos[c] - neg[c];
  }
  return out;
}

MotionAxis top_k_channels(const Layout& layout, std::span<const double> scores, std::size_t k,
                          const std::set<std::size_t>& excluded_layers, std::string name) {
  if (scores.size() != layout.total()) {
    throw LayoutMismatch("channel scores do not match the layout");
  }
  if (k < 1) {
    throw InvalidArgument("top-k selection needs k >= 1");
  }
  std::vector<std::size_t> eligible;
  for (std::size_t l = 0; l < layout.layer_count(); ++l) {
    if (excluded_layers.contains(l)) {
      continue;
    }
    for (std::size_t c = 0; c < layout.channels(l); ++c) {
      eligible.push_back(layout.offset(l) + c);
    }
  }
  if (k > eligible.size()) {
    throw InvalidArgument("top-k selection asks for " + std::to_string(k) + " channels but only " +
                          std::to_string(eligible.size()) + " are eligible");
  }
  // Flat order is (layer, channel) order, so the flat index breaks ties.
  std::partial_sort(eligible.begin(), eligible.begin() + static_cast<std::ptrdiff_t>(k), eligible.end(),
                    [&](std::size_t a, std::size_t b) { return scores[a] > scores[b] || (scores[a] == scores[b] && a < b); });

  MotionAxis out;
  out.name = std::move(name);
  out.layout = layout;
  out.k = k;
  out.excluded_layers = excluded_layers;
  for (std::size_t r = 0; r < k; ++r) {
    const auto ref = layout.locate(eligible[r]);
    out.top.push_back({ref.layer, ref.channel, scores[eligible[r]], r + 1});
  }
  return out;
}

MotionAxis top_k_channels(const AxisScore& axis, std::size_t k, const std::set<std::size_t>& excluded_layers,
                          std::string name) {
  return top_k_channels(axis.layout, axis.theta_r, k, excluded_layers, std::move(name));
}

double axis_projection(const StyleCode& code, const MotionAxis& axis, const PopulationStats& pop, Normalization mode) {
  require_same_layout(code.layout(), pop.layout, "axis projection");
  require_same_layout(code.layout(), axis.layout, "axis projection");
  if (axis.top.empty()) {
    throw InvalidArgument("axis projection needs a non-empty axis");
  }
  double sum = 0.0;
  for (const auto& ch : axis.top) {
    const auto flat = code.layout().flat_index(ch.layer, ch.channel);
    sum += normalize_value(code[flat], pop, flat, mode);
  }
  return sum / static_cast<double>(axis.top.size());
}

std::vector<double> axis_projection(std::span<const StyleCode> codes, const MotionAxis& axis,
                                    const PopulationStats& pop, Normalization mode) {
  std::vector<double> out;
  out.reserve(codes.size());
  for (const auto& code : codes) {
    out.push_back(axis_projection(code, axis, pop, mode));
  }
  return out;
}

AxisDefinition mouth_opening_axis() {
  using E = Expression;
  return {"mouth-opening",
          {E::BaredTeeth, E::Bark, E::Scream, E::Threat, E::Yawn},
          {E::Blink, E::BrowRaise, E::LipSmack, E::LookUp, E::LookDown, E::LookLeft, E::LookRight}};
}

AxisDefinition eye_closing_axis() {
  using E = Expression;
  return {"eye-closing",
          {E::Blink, E::LookDown},
          {E::BaredTeeth, E::Bark, E::BrowRaise, E::Chewing, E::LipSmack, E::Scream, E::Threat}};
}

}  // namespace latentlens::stylespace
