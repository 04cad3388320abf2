#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

#include "latentlens/curation/dataset.hpp"
#include "latentlens/curation/sampling.hpp"
#include "latentlens/error.hpp"
#include "latentlens/rng.hpp"

namespace latentlens::curation {

std::map<std::string, Split> split_dataset(std::vector<GroupSize> groups, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) {
    throw InvalidArgument("train fraction must be in [0, 1]");
  }
  std::sort(groups.begin(), groups.end(), [](const GroupSize& a, const GroupSize& b) { return a.key < b.key; });
  Rng rng(seed);
  rng.shuffle(std::span<GroupSize>(groups));

  std::size_t total = 0;
  for (const auto& g : groups) {
    total += g.count;
  }
  const double target = train_fraction * static_cast<double>(total);

  std::map<std::string, Split> out;
  double train = 0.0;
  for (const auto& g : groups) {
    const double with = train + static_cast<double>(g.count);
    if (std::abs(with - target) <= std::abs(train - target)) {
      out[g.key] = Split::Train;
      train = with;
    } else {
      out[g.key] = Split::Test;
    }
  }
  return out;
}

std::map<std::string, Split> split_dataset(const LatentArchive& archive, double train_fraction, std::uint64_t seed) {
  std::map<std::string, std::size_t> counts;
  for (const auto& rec : archive.records()) {
    ++counts[rec.group_key()];
  }
  std::vector<GroupSize> groups;
  groups.reserve(counts.size());
  for (const auto& [key, count] : counts) {
    groups.push_back({key, count});
  }
  return split_dataset(std::move(groups), train_fraction, seed);
}

LatentArchive apply_split(const LatentArchive& archive, const std::map<std::string, Split>& assignment) {
  std::vector<LatentRecord> records(archive.records().begin(), archive.records().end());
  for (auto& rec : records) {
    const auto it = assignment.find(rec.group_key());
    if (it == assignment.end()) {
      throw InvalidArgument("no split assigned for group '" + rec.group_key() + "'");
    }
    rec.split = it->second;
  }
  return LatentArchive(archive.layout(), std::move(records));
}

std::vector<DrivingQuota> paper_driving_quotas() {
  return {
      {"cg", std::vector<Expression>(kCgExpressions.begin(), kCgExpressions.end()), 100},
      {"look-vertical-tongue", {Expression::LookUp, Expression::LookDown, Expression::TongueShow}, 10},
      {"look-horizontal", {Expression::LookLeft, Expression::LookRight}, 20},
  };
}

std::size_t SecondRoundResult::count(Split split) const {
  std::size_t n = 0;
  for (const auto& [key, c] : composition) {
    if (key.split == split) {
      n += c;
    }
  }
  return n;
}

namespace {

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream) { return Rng::derive(seed, stream).next(); }

std::vector<std::size_t> weighted_pick(const LatentArchive& pool, std::span<const std::size_t> candidates,
                                       std::size_t n, std::uint64_t seed, double exponent, const std::string& what) {
  if (n > candidates.size()) {
    throw InvalidArgument(what + " asks for " + std::to_string(n) + " frames but only " +
                          std::to_string(candidates.size()) + " are available");
  }
  if (n == 0) {
    return {};
  }
  SamplingOptions options;
  options.n = n;
  options.seed = seed;
  options.exponent = exponent;
  const auto local = weighted_diversity_sample(pool.code_matrix(candidates), options).indices;
  std::vector<std::size_t> picked;
  picked.reserve(local.size());
  for (const auto i : local) {
    picked.push_back(candidates[i]);
  }
  return picked;
}

}  // namespace

SecondRoundResult build_second_round_manifest(const LatentArchive& stills, const LatentArchive& real_video_frames,
                                              const LatentArchive& driving_frames, const LatentArchive& transferred,
                                              const std::vector<TransferLink>& links, const SecondRoundParams& params) {
  const Layout& layout = stills.layout();
  for (const auto* other : {&real_video_frames, &transferred}) {
    if (!other->empty()) {
      require_same_layout(other->layout(), layout, "second-round assembly");
    }
  }

  SecondRoundResult out;
  std::vector<LatentRecord> records(stills.records().begin(), stills.records().end());

  // Real-video frames.
  std::vector<std::size_t> all_real(real_video_frames.size());
  std::iota(all_real.begin(), all_real.end(), std::size_t{0});
  for (const auto i : weighted_pick(real_video_frames, all_real, params.n_real, sub_seed(params.seed, 0),
                                    params.exponent, "real-video selection")) {
    out.selected_real.push_back(real_video_frames[i].id);
    records.push_back(real_video_frames[i]);
  }

  // Driving frames, one weighted draw per quota group.
  std::set<std::string> chosen_driving;
  for (std::size_t q = 0; q < params.quotas.size(); ++q) {
    const auto& quota = params.quotas[q];
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < driving_frames.size(); ++i) {
      const auto& e = driving_frames[i].expression;
      if (e && std::find(quota.expressions.begin(), quota.expressions.end(), *e) != quota.expressions.end()) {
        candidates.push_back(i);
      }
    }
    for (const auto i : weighted_pick(driving_frames, candidates, quota.count, sub_seed(params.seed, q + 1),
                                      params.exponent, "driving quota '" + quota.name + "'")) {
      out.selected_driving.push_back(driving_frames[i].id);
      chosen_driving.insert(driving_frames[i].id);
    }
  }

  // Transferred records driven by a chosen frame inherit their still's split.
  std::unordered_map<std::string, std::string> driver_of;
  for (const auto& link : links) {
    driver_of[link.transferred_id] = link.driving_frame_id;
  }
  for (const auto& rec : transferred.records()) {
    const auto it = driver_of.find(rec.id);
    if (it == driver_of.end()) {
      throw InvalidArgument("transferred record '" + rec.id + "' has no driving-frame link");
    }
    if (!chosen_driving.contains(it->second)) {
      continue;
    }
    if (!rec.source_id) {
      throw InvalidArgument("transferred record '" + rec.id + "' has no source still");
    }
    const auto still = stills.find(*rec.source_id);
    if (!still) {
      throw InvalidArgument("transferred record '" + rec.id + "' names unknown still '" + *rec.source_id + "'");
    }
    LatentRecord copy = rec;
    copy.split = stills[*still].split;
    records.push_back(std::move(copy));
  }

  std::map<std::string, Split> split_of_group;
  for (const auto& rec : records) {
    const auto [it, inserted] = split_of_group.emplace(rec.group_key(), rec.split);
    if (!inserted && it->second != rec.split) {
      throw InvalidArgument("split contamination: source '" + rec.group_key() + "' appears in train and test");
    }
    ++out.composition[{rec.origin, rec.expression, rec.split}];
  }
  out.archive = LatentArchive(layout, std::move(records));
  return out;
}

}  // namespace latentlens::curation
