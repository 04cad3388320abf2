#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "latentlens/archive.hpp"
#include "latentlens/record.hpp"

namespace latentlens::curation {

struct GroupSize {
  std::string key;
  std::size_t count = 0;
};

inline constexpr double kDefaultTrainFraction = 0.95;

/// Assigns whole groups to train or test so that the train share of records
/// approaches `train_fraction`. Groups are sorted by key, shuffled with
/// Rng(seed), then visited in that order; a group joins train when doing so
/// does not move the train count further from fraction * total.
std::map<std::string, Split> split_dataset(std::vector<GroupSize> groups, double train_fraction, std::uint64_t seed);

/// split_dataset over the archive's group keys (source_id, else id).
std::map<std::string, Split> split_dataset(const LatentArchive& archive, double train_fraction, std::uint64_t seed);

/// Copy of `archive` with every record's split set from `assignment`.
LatentArchive apply_split(const LatentArchive& archive, const std::map<std::string, Split>& assignment);

/// A shared draw budget over a set of driving-video expressions.
struct DrivingQuota {
  std::string name;
  std::vector<Expression> expressions;
  std::size_t count = 0;
};

/// 100 frames over the eleven CG expressions, 10 over Look-up/Look-down/
/// Tongue-show, 20 over Look-left/Look-right: 130 in total.
std::vector<DrivingQuota> paper_driving_quotas();

/// Motion-transferred record `transferred_id` was animated by `driving_frame_id`.
struct TransferLink {
  std::string transferred_id;
  std::string driving_frame_id;
};

struct SecondRoundParams {
  std::size_t n_real = 2000;
  std::vector<DrivingQuota> quotas = paper_driving_quotas();
  std::uint64_t seed = 0;
  double exponent = 2.0;
};

struct CompositionKey {
  Origin origin = Origin::Still;
  std::optional<Expression> expression;
  Split split = Split::Train;

  friend auto operator<=>(const CompositionKey&, const CompositionKey&) = default;
};

struct SecondRoundResult {
  LatentArchive archive;
  std::vector<std::string> selected_real;
  std::vector<std::string> selected_driving;
  std::map<CompositionKey, std::size_t> composition;

  std::size_t count(Split split) const;
};

/// Assembles the second-round training set: all stills, n_real real-video
/// frames chosen by weighted_diversity_sample, and the transferred records
/// whose driving frame was picked by the per-quota weighted draw. A
/// transferred record inherits the split of its source still. Throws
/// InvalidArgument when a quota or n_real exceeds what is available, and
/// when one source id would end up in both splits.
SecondRoundResult build_second_round_manifest(const LatentArchive& stills, const LatentArchive& real_video_frames,
                                              const LatentArchive& driving_frames, const LatentArchive& transferred,
                                              const std::vector<TransferLink>& links, const SecondRoundParams& params);

}  // namespace latentlens::curation
