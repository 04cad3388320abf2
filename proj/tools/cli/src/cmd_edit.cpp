#include <cstdio>
#include <memory>
#include <optional>

#include "common.hpp"
#include "latentlens/editing.hpp"
#include "latentlens/error.hpp"

namespace latentlens::cli {

namespace {

using namespace latentlens::editing;

struct BoundaryArgs {
  std::string archive;
  std::string attr;
  std::string neg;
  double age_threshold = kDefaultAgeThreshold;
  std::string selection;
  double l2 = 1.0;
  std::size_t max_iter = 1000;
  double tol = 1e-6;
  std::string space = "archive";
  std::string out;
};

struct ApplyArgs {
  std::string archive;
  std::string boundary;
  double alpha = 0.0;
  std::string ids;
  std::string layers;
  std::string out;
};

struct MorphArgs {
  std::string archive;
  std::string a;
  std::string b;
  std::string ratios = "0.25,0.5,0.75";
  std::string out;
};

struct MixArgs {
  std::string archive;
  std::string dst;
  std::string src;
  std::string layers;
  std::string out;
};

struct ChannelArgs {
  std::string archive;
  std::string ids;
  std::size_t layer = 0;
  std::size_t channel = 0;
  std::optional<double> set;
  std::optional<double> shift;
  std::string out;
};

std::string fmt_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Edited copy of a record: new id and code, provenance kept in source_id.
LatentRecord derived(const LatentRecord& base, std::string id, StyleCode code) {
  LatentRecord r = base;
  r.id = std::move(id);
  r.code = std::move(code);
  r.source_id = base.group_key();
  return r;
}

LayerMask layer_mask(const Layout& layout, const std::string& text) {
  if (text.empty()) {
    return {};
  }
  LayerMask mask(layout.layer_count(), false);
  for (const auto l : parse_layer_list(text)) {
    if (l >= mask.size()) {
      throw InvalidArgument("layer " + std::to_string(l) + " out of range");
    }
    mask[l] = true;
  }
  return mask;
}

}  // namespace

void register_edit(CLI::App& root, const Globals& g) {
  auto* edit = root.add_subcommand("edit", "Attribute boundaries and latent edits");
  edit->require_subcommand(1);

  auto ba = std::make_shared<BoundaryArgs>();
  auto* boundary = edit->add_subcommand("boundary", "Fit a linear attribute boundary (logistic regression)");
  boundary->add_option("--archive", ba->archive, "Archive directory")->required()->check(CLI::ExistingDirectory);
  boundary->add_option("--attr", ba->attr, "Positive class: key=value, or 'age' to split by --age-threshold")
      ->required();
  boundary->add_option("--neg", ba->neg, "Negative class key=value (default: every other record)");
  boundary->add_option("--age-threshold", ba->age_threshold, "Ages below this are negatives")->capture_default_str();
  boundary->add_option("--selection", ba->selection, "Restrict to the ids of a selection.json");
  boundary->add_option("--l2", ba->l2, "L2 regularisation")->capture_default_str();
  boundary->add_option("--max-iter", ba->max_iter, "Gradient-descent iterations")->capture_default_str();
  boundary->add_option("--tol", ba->tol, "Gradient-norm stopping tolerance")->capture_default_str();
  boundary->add_option("--space", ba->space, "Latent space label stored in the output")->capture_default_str();
  boundary->add_option("--out", ba->out, "boundary.json")->required();
  boundary->callback([ba, &g] {
    const auto archive = load_archive(ba->archive);
    const auto rows = selection_rows(archive, ba->selection);
    std::vector<StyleCode> pos;
    std::vector<StyleCode> neg;
    std::string attribute = ba->attr;
    if (ba->attr == "age") {
      if (!ba->neg.empty()) {
        throw UsageError("--neg cannot be combined with --attr age");
      }
      std::vector<LatentRecord> records;
      for (const auto i : rows) {
        records.push_back(archive[i]);
      }
      const auto part = age_partition(records, ba->age_threshold);
      for (const auto i : part.positives) pos.push_back(records[i].code);
      for (const auto i : part.negatives) neg.push_back(records[i].code);
      attribute = "age>=" + fmt_number(ba->age_threshold);
    } else {
      const auto pf = parse_label_filter(ba->attr);
      const auto nf = ba->neg.empty() ? std::optional<LabelFilter>{} : parse_label_filter(ba->neg);
      for (const auto i : rows) {
        const auto& r = archive[i];
        if (pf.matches(r)) {
          pos.push_back(r.code);
        } else if (!nf || nf->matches(r)) {
          neg.push_back(r.code);
        }
      }
      if (nf) {
        attribute += " vs " + ba->neg;
      }
    }
    BoundaryOptions opt;
    opt.l2_reg = ba->l2;
    opt.max_iter = ba->max_iter;
    opt.tol = ba->tol;
    opt.attribute = attribute;
    opt.space = ba->space;
    const auto b = fit_boundary(pos, neg, opt);
    auto j = boundary_json(b);
    j["counts"] = {{"positive", pos.size()}, {"negative", neg.size()}};
    write_json(ba->out, j, g);
    if (!b.diagnostics.converged) {
      info(g, "warning: boundary fit did not converge within " + std::to_string(ba->max_iter) + " iterations");
    }
  });

  auto aa = std::make_shared<ApplyArgs>();
  auto* apply = edit->add_subcommand("apply", "Move records along a boundary normal");
  apply->add_option("--archive", aa->archive, "Archive directory")->required()->check(CLI::ExistingDirectory);
  apply->add_option("--boundary", aa->boundary, "boundary.json")->required()->check(CLI::ExistingFile);
  apply->add_option("--alpha", aa->alpha, "Edit strength")->required();
  apply->add_option("--ids", aa->ids, "Comma-separated record ids")->required();
  apply->add_option("--layers", aa->layers, "Restrict the edit to these layers, e.g. 0-2,6");
  apply->add_option("--out", aa->out, "Output archive directory")->required();
  apply->callback([aa, &g] {
    const auto archive = load_archive(aa->archive);
    const auto b = boundary_from_json(read_json(aa->boundary));
    const auto mask = layer_mask(archive.layout(), aa->layers);
    std::vector<LatentRecord> out;
    for (const auto& id : split_list(aa->ids)) {
      const auto& r = archive[archive.index_of(id)];
      out.push_back(derived(r, id + "@alpha=" + fmt_number(aa->alpha), linear_edit(r.code, b, aa->alpha, mask)));
    }
    write_archive_dir(LatentArchive(archive.layout(), std::move(out)), aa->out, g);
  });

  auto ma = std::make_shared<MorphArgs>();
  auto* morph_cmd = edit->add_subcommand("morph", "Blend two records at fixed ratios");
  morph_cmd->add_option("--archive", ma->archive, "Archive directory")->required()->check(CLI::ExistingDirectory);
  morph_cmd->add_option("--a", ma->a, "First record id (ratio 0)")->required();
  morph_cmd->add_option("--b", ma->b, "Second record id (ratio 1)")->required();
  morph_cmd->add_option("--ratios", ma->ratios, "Comma-separated blend ratios in [0,1]")->capture_default_str();
  morph_cmd->add_option("--out", ma->out, "Output archive directory")->required();
  morph_cmd->callback([ma, &g] {
    const auto archive = load_archive(ma->archive);
    const auto& a = archive[archive.index_of(ma->a)];
    const auto& b = archive[archive.index_of(ma->b)];
    std::vector<LatentRecord> out;
    for (const double t : parse_doubles(ma->ratios)) {
      auto r = derived(a, ma->a + "~" + ma->b + "@" + fmt_number(t), morph(a.code, b.code, t));
      r.expression.reset();
      out.push_back(std::move(r));
    }
    write_archive_dir(LatentArchive(archive.layout(), std::move(out)), ma->out, g);
  });

  auto xa = std::make_shared<MixArgs>();
  auto* mix = edit->add_subcommand("mix", "Copy whole layers from one record into another");
  mix->add_option("--archive", xa->archive, "Archive directory")->required()->check(CLI::ExistingDirectory);
  mix->add_option("--dst", xa->dst, "Record that keeps the other layers")->required();
  mix->add_option("--src", xa->src, "Record the listed layers come from")->required();
  mix->add_option("--layers", xa->layers, "Layers from src, e.g. 0-2 or 6-8")->required();
  mix->add_option("--out", xa->out, "Output archive directory")->required();
  mix->callback([xa, &g] {
    const auto archive = load_archive(xa->archive);
    const auto& dst = archive[archive.index_of(xa->dst)];
    const auto& src = archive[archive.index_of(xa->src)];
    const auto layers = parse_layer_list(xa->layers);
    std::vector<LatentRecord> out;
    out.push_back(derived(dst, xa->dst + "<" + xa->src + "[" + xa->layers + "]", style_mix(dst.code, src.code, layers)));
    write_archive_dir(LatentArchive(archive.layout(), std::move(out)), xa->out, g);
  });

  auto ca = std::make_shared<ChannelArgs>();
  auto* channel = edit->add_subcommand("channel", "Set or shift a single style channel");
  channel->add_option("--archive", ca->archive, "Archive directory")->required()->check(CLI::ExistingDirectory);
  channel->add_option("--ids", ca->ids, "Comma-separated record ids")->required();
  channel->add_option("--layer", ca->layer, "Layer index")->required();
  channel->add_option("--channel", ca->channel, "Channel index within the layer")->required();
  auto* set_opt = channel->add_option("--set", ca->set, "New value");
  auto* shift_opt = channel->add_option("--shift", ca->shift, "Value to add");
  set_opt->excludes(shift_opt);
  channel->add_option("--out", ca->out, "Output archive directory")->required();
  channel->callback([ca, &g] {
    if (!ca->set && !ca->shift) {
      throw UsageError("one of --set or --shift is required");
    }
    const auto archive = load_archive(ca->archive);
    std::vector<LatentRecord> out;
    for (const auto& id : split_list(ca->ids)) {
      const auto& r = archive[archive.index_of(id)];
      const auto tag = "@" + std::to_string(ca->layer) + ":" + std::to_string(ca->channel);
      if (ca->set) {
        out.push_back(derived(r, id + tag + "=" + fmt_number(*ca->set),
                              set_channel(r.code, ca->layer, ca->channel, *ca->set)));
      } else {
        out.push_back(derived(r, id + tag + "+" + fmt_number(*ca->shift),
                              shift_channel(r.code, ca->layer, ca->channel, *ca->shift)));
      }
    }
    write_archive_dir(LatentArchive(archive.layout(), std::move(out)), ca->out, g);
  });
}

}  // namespace latentlens::cli
