#include <iostream>
#include <map>
#include <memory>

#include "common.hpp"
#include "latentlens/curation/dataset.hpp"
#include "latentlens/curation/entropy.hpp"
#include "latentlens/curation/filters.hpp"
#include "latentlens/curation/sampling.hpp"
#include "latentlens/error.hpp"

namespace latentlens::cli {

namespace {

using namespace latentlens::curation;

struct SampleArgs {
  std::string archive;
  std::size_t n = 0;
  double exponent = 2.0;
  std::string out;
  std::string subset_out;
};

struct EntropyArgs {
  std::string archive;
  std::string selection;
  std::size_t k = kDefaultNeighbors;
  std::size_t groups = kDefaultJackknifeGroups;
  std::string out;
};

struct SweepArgs {
  std::string archive;
  std::string sizes = "500,1000,2000,3000,4000,5000,10000";
  std::size_t k = kDefaultNeighbors;
  std::size_t groups = kDefaultJackknifeGroups;
  double exponent = 2.0;
  std::string out;
};

struct SplitArgs {
  std::string archive;
  double fraction = kDefaultTrainFraction;
  std::string out;
  std::string archive_out;
};

struct TracksArgs {
  std::string bboxes;
  double iou = kDefaultTrackIou;
  std::string out;
};

struct PoseArgs {
  std::string clips;
  double max_yaw = kDefaultMaxAbsYaw;
  std::string out;
};

struct AssembleArgs {
  std::string stills;
  std::string real;
  std::string driving;
  std::string transferred;
  std::string links;
  std::string quotas;
  std::size_t n_real = 2000;
  double exponent = 2.0;
  std::string out;
};

void emit(const ojson& j, const std::string& out, const Globals& g) {
  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json(out, j, g);
  }
}

ojson estimate_json(const EntropyEstimate& e) {
  return {{"entropy_nats", e.value}, {"stderr_nats", e.standard_error}, {"k", e.k}, {"n", e.n},
          {"method", e.method == EntropyMethod::Jackknife ? "jackknife" : "plain"}};
}

std::vector<DrivingQuota> load_quotas(const std::string& path) {
  std::vector<DrivingQuota> quotas;
  for (const auto& q : read_json(path)) {
    DrivingQuota d;
    d.name = q.at("name").get<std::string>();
    for (const auto& e : q.at("expressions")) {
      d.expressions.push_back(parse_expression(e.get<std::string>()));
    }
    d.count = q.at("count").get<std::size_t>();
    quotas.push_back(std::move(d));
  }
  return quotas;
}

}  // namespace

void register_curate(CLI::App& root, const Globals& g) {
  auto* curate = root.add_subcommand("curate", "Dataset curation: sampling, entropy, splits, filters");
  curate->require_subcommand(1);

  auto sa = std::make_shared<SampleArgs>();
  auto* sample = curate->add_subcommand("sample", "Diversity-weighted sample without replacement");
  sample->add_option("--archive", sa->archive, "Archive directory")->required()->check(CLI::ExistingDirectory);
  sample->add_option("--n", sa->n, "Sample size")->required()->check(CLI::PositiveNumber);
  sample->add_option("--exponent", sa->exponent, "Weight is d_min^exponent (2: k-means++, 1: raw distance)")
      ->capture_default_str();
  sample->add_option("--out", sa->out, "selection.json")->required();
  sample->add_option("--subset-out", sa->subset_out, "Also write the selected records as an archive");
  sample->callback([sa, &g] {
    const auto archive = load_archive(sa->archive);
    SamplingOptions opt;
    opt.n = sa->n;
    opt.seed = g.seed;
    opt.exponent = sa->exponent;
    const auto sel = weighted_diversity_sample(archive, opt);
    ojson j;
    j["seed"] = sel.seed;
    j["exponent"] = sel.weight_exponent;
    j["n"] = sel.ids.size();
    j["uniform_fallbacks"] = sel.uniform_fallbacks;
    j["ids"] = sel.ids;
    j["indices"] = sel.indices;
    write_json(sa->out, j, g);
    if (!sa->subset_out.empty()) {
      write_archive_dir(archive.subset(sel.indices), sa->subset_out, g);
    }
  });

  auto ea = std::make_shared<EntropyArgs>();
  auto* entropy = curate->add_subcommand("entropy", "Jackknifed k-NN entropy of an archive (nats)");
  entropy->add_option("--archive", ea->archive, "Archive directory")->required()->check(CLI::ExistingDirectory);
  entropy->add_option("--selection", ea->selection, "Restrict to the ids of a selection.json");
  entropy->add_option("--k", ea->k, "Neighbour rank")->capture_default_str();
  entropy->add_option("--groups", ea->groups, "Jackknife folds")->capture_default_str();
  entropy->add_option("--out", ea->out, "JSON output (stdout when absent)");
  entropy->callback([ea, &g] {
    const auto archive = load_archive(ea->archive);
    const auto rows = selection_rows(archive, ea->selection);
    const auto est = jackknife_entropy(archive.code_matrix(rows), ea->k, ea->groups, g.seed);
    auto j = estimate_json(est);
    j["groups"] = ea->groups;
    j["seed"] = g.seed;
    emit(j, ea->out, g);
  });

  auto wa = std::make_shared<SweepArgs>();
  auto* sweep = curate->add_subcommand("sweep", "Entropy of weighted samples over a list of sizes");
  sweep->add_option("--archive", wa->archive, "Archive directory")->required()->check(CLI::ExistingDirectory);
  sweep->add_option("--sizes", wa->sizes, "Comma-separated sample sizes")->capture_default_str();
  sweep->add_option("--k", wa->k, "Neighbour rank")->capture_default_str();
  sweep->add_option("--groups", wa->groups, "Jackknife folds")->capture_default_str();
  sweep->add_option("--exponent", wa->exponent, "Sampling weight exponent")->capture_default_str();
  sweep->add_option("--out", wa->out, "sweep.csv")->required();
  sweep->callback([wa, &g] {
    SweepOptions opt;
    opt.sizes = parse_counts(wa->sizes);
    opt.k = wa->k;
    opt.groups = wa->groups;
    opt.seed = g.seed;
    opt.exponent = wa->exponent;
    const auto result = sweep_sample_sizes(load_archive(wa->archive), opt);
    write_text(wa->out, sweep_csv(result), g);
    info(g, "plateau size " + std::to_string(result.plateau_size));
  });

  auto pa = std::make_shared<SplitArgs>();
  auto* split = curate->add_subcommand("split", "Assign whole source groups to train/test");
  split->add_option("--archive", pa->archive, "Archive directory")->required()->check(CLI::ExistingDirectory);
  split->add_option("--fraction", pa->fraction, "Train share of records")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  split->add_option("--out", pa->out, "split.json (group key -> split)")->required();
  split->add_option("--archive-out", pa->archive_out, "Also write the archive with splits applied");
  split->callback([pa, &g] {
    const auto archive = load_archive(pa->archive);
    const auto assignment = split_dataset(archive, pa->fraction, g.seed);
    const auto applied = apply_split(archive, assignment);
    std::size_t train = 0;
    for (const auto& r : applied.records()) {
      train += r.split == Split::Train ? 1 : 0;
    }
    ojson j;
    j["seed"] = g.seed;
    j["fraction"] = pa->fraction;
    j["train_records"] = train;
    j["test_records"] = applied.size() - train;
    auto& groups = j["groups"] = ojson::object();
    for (const auto& [key, s] : assignment) {
      groups[key] = std::string(to_string(s));
    }
    write_json(pa->out, j, g);
    if (!pa->archive_out.empty()) {
      write_archive_dir(applied, pa->archive_out, g);
    }
  });

  auto ta = std::make_shared<TracksArgs>();
  auto* tracks = curate->add_subcommand("tracks", "Cut bounding-box detections into contiguous face tracks");
  tracks->add_option("--bboxes", ta->bboxes, "JSONL rows {clip?, frame, bbox:[x0,y0,x1,y1]}")
      ->required()
      ->check(CLI::ExistingFile);
  tracks->add_option("--iou", ta->iou, "Minimum IoU between consecutive frames")->capture_default_str();
  tracks->add_option("--out", ta->out, "JSON output (stdout when absent)");
  tracks->callback([ta, &g] {
    std::vector<std::string> clip_order;
    std::map<std::string, std::vector<TrackedFrame>> by_clip;
    for (const auto& row : read_jsonl(ta->bboxes)) {
      const auto clip = row.value("clip", std::string{});
      const auto box = row.at("bbox").get<std::vector<double>>();
      if (box.size() != 4) {
        throw FormatError("bbox must have 4 numbers");
      }
      if (!by_clip.contains(clip)) {
        clip_order.push_back(clip);
      }
      by_clip[clip].push_back({row.at("frame").get<std::int64_t>(), BBox{box[0], box[1], box[2], box[3]}});
    }
    ojson j;
    j["iou"] = ta->iou;
    auto& segs = j["segments"] = ojson::array();
    for (const auto& clip : clip_order) {
      for (const auto& s : bbox_track_filter(by_clip[clip], ta->iou)) {
        segs.push_back({{"clip", clip},
                        {"first_frame", s.frames.front().frame_index},
                        {"last_frame", s.frames.back().frame_index},
                        {"frames", s.frames.size()}});
      }
    }
    emit(j, ta->out, g);
  });

  auto oa = std::make_shared<PoseArgs>();
  auto* pose = curate->add_subcommand("pose", "Keep clips whose first-frame head yaw is near frontal");
  pose->add_option("--clips", oa->clips, "JSONL rows {clip_id, yaw_deg}")->required()->check(CLI::ExistingFile);
  pose->add_option("--max-yaw", oa->max_yaw, "Maximum |yaw| in degrees (inclusive)")->capture_default_str();
  pose->add_option("--out", oa->out, "JSON output (stdout when absent)");
  pose->callback([oa, &g] {
    std::vector<ClipPose> clips;
    for (const auto& row : read_jsonl(oa->clips)) {
      clips.push_back({row.at("clip_id").get<std::string>(), row.at("yaw_deg").get<double>()});
    }
    const auto kept = head_pose_filter(clips, oa->max_yaw);
    emit(ojson{{"max_abs_yaw", oa->max_yaw}, {"input", clips.size()}, {"accepted", kept}}, oa->out, g);
  });

  auto aa = std::make_shared<AssembleArgs>();
  auto* assemble = curate->add_subcommand("assemble", "Build the second-round training manifest");
  assemble->add_option("--stills", aa->stills, "Still-image archive")->required()->check(CLI::ExistingDirectory);
  assemble->add_option("--real", aa->real, "Real video-frame archive")->required()->check(CLI::ExistingDirectory);
  assemble->add_option("--driving", aa->driving, "Driving-frame archive")->required()->check(CLI::ExistingDirectory);
  assemble->add_option("--transferred", aa->transferred, "Motion-transferred archive")
      ->required()
      ->check(CLI::ExistingDirectory);
  assemble->add_option("--links", aa->links, "JSONL rows {transferred_id, driving_frame_id}")
      ->required()
      ->check(CLI::ExistingFile);
  assemble->add_option("--quotas", aa->quotas, "JSON [{name, expressions, count}] (default: 100/10/20 split)")
      ->check(CLI::ExistingFile);
  assemble->add_option("--n-real", aa->n_real, "Real video frames to select")->capture_default_str();
  assemble->add_option("--exponent", aa->exponent, "Sampling weight exponent")->capture_default_str();
  assemble->add_option("--out", aa->out, "Output archive directory (composition.json written inside)")->required();
  assemble->callback([aa, &g] {
    std::vector<TransferLink> links;
    for (const auto& row : read_jsonl(aa->links)) {
      links.push_back({row.at("transferred_id").get<std::string>(), row.at("driving_frame_id").get<std::string>()});
    }
    SecondRoundParams params;
    params.n_real = aa->n_real;
    params.seed = g.seed;
    params.exponent = aa->exponent;
    if (!aa->quotas.empty()) {
      params.quotas = load_quotas(aa->quotas);
    }
    const auto result = build_second_round_manifest(load_archive(aa->stills), load_archive(aa->real),
                                                    load_archive(aa->driving), load_archive(aa->transferred), links,
                                                    params);
    write_archive_dir(result.archive, aa->out, g);
    ojson j;
    j["seed"] = g.seed;
    j["train"] = result.count(Split::Train);
    j["test"] = result.count(Split::Test);
    j["selected_real"] = result.selected_real;
    j["selected_driving"] = result.selected_driving;
    auto& comp = j["composition"] = ojson::array();
    for (const auto& [key, count] : result.composition) {
      comp.push_back({{"origin", std::string(to_string(key.origin))},
                      {"expression", key.expression ? ojson(std::string(to_string(*key.expression))) : ojson()},
                      {"split", std::string(to_string(key.split))},
                      {"count", count}});
    }
    write_json(fs::path(aa->out) / "composition.json", j, Globals{g.seed, true, g.quiet});
  });
}

}  // namespace latentlens::cli
