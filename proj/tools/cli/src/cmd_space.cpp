#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "common.hpp"
#include "latentlens/error.hpp"
#include "latentlens/stylespace.hpp"
#include "latentlens_cli/cli.hpp"

namespace latentlens::cli {

namespace {

using namespace latentlens::stylespace;

struct RelevanceArgs {
  std::string archive;
  std::string expr;
  std::string neutral = "Neutral";
  std::string normalization = "standardize";
  std::string out;
};

struct AxisArgs {
  std::string archive;
  std::string relevance;
  std::string preset;
  std::string pos;
  std::string neg;
  std::size_t k = kDefaultTopK;
  std::string exclude = "0";
  std::string name;
  std::string neutral = "Neutral";
  std::string normalization = "standardize";
  std::string out;
};

struct ProjectArgs {
  std::string archive;
  std::string population;
  std::string axes;
  std::string split;
  std::string normalization = "standardize";
  std::string out;
  std::string svg;
};

Normalization parse_normalization(const std::string& s) {
  if (s == "standardize") return Normalization::Standardize;
  if (s == "mean-only") return Normalization::MeanOnly;
  throw UsageError("--normalization must be standardize or mean-only");
}

std::map<Expression, ChannelRelevance> relevances_from_archive(const LatentArchive& archive,
                                                               const std::set<Expression>& wanted, Expression neutral,
                                                               Normalization mode, std::map<Expression, std::size_t>* pairs) {
  const auto pop = population_stats(archive);
  std::map<Expression, ChannelRelevance> out;
  for (const auto e : wanted) {
    const auto set = differential_set(archive, e, pop, neutral, mode);
    if (pairs != nullptr) {
      (*pairs)[e] = set.deltas.size();
    }
    out.emplace(e, channel_relevance(set));
  }
  return out;
}

}  // namespace

void register_space(CLI::App& root, const Globals& g) {
  auto* space = root.add_subcommand("space", "Style-channel relevance, motion axes and projections");
  space->require_subcommand(1);

  auto ra = std::make_shared<RelevanceArgs>();
  auto* relevance = space->add_subcommand("relevance", "Per-channel relevance of expressions against neutral");
  relevance->add_option("--archive", ra->archive, "Archive directory")->required()->check(CLI::ExistingDirectory);
  relevance->add_option("--expr", ra->expr, "Comma-separated expression names")->required();
  relevance->add_option("--neutral-label", ra->neutral, "Label of the paired neutral records")->capture_default_str();
  relevance->add_option("--normalization", ra->normalization, "standardize | mean-only")->capture_default_str();
  relevance->add_option("--out", ra->out, "relevance JSON")->required();
  relevance->callback([ra, &g] {
    const auto exprs = parse_expressions(ra->expr);
    std::map<Expression, std::size_t> pairs;
    const auto rel = relevances_from_archive(load_archive(ra->archive), {exprs.begin(), exprs.end()},
                                             parse_expression(ra->neutral), parse_normalization(ra->normalization),
                                             &pairs);
    ojson j;
    j["neutral"] = ra->neutral;
    j["normalization"] = ra->normalization;
    auto& list = j["relevances"] = ojson::array();
    for (const auto e : exprs) {
      list.push_back(relevance_json(rel.at(e), pairs.at(e)));
    }
    write_json(ra->out, j, g);
  });

  auto aa = std::make_shared<AxisArgs>();
  auto* axis = space->add_subcommand("axis", "Rank channels by positive-minus-negative relevance");
  auto* src_archive = axis->add_option("--archive", aa->archive, "Archive directory")->check(CLI::ExistingDirectory);
  auto* src_rel = axis->add_option("--relevance", aa->relevance, "Comma-separated relevance JSON files");
  src_archive->excludes(src_rel);
  axis->add_option("--preset", aa->preset, "mouth | eye: predefined category sets");
  axis->add_option("--pos", aa->pos, "Positive expressions");
  axis->add_option("--neg", aa->neg, "Negative expressions");
  axis->add_option("--k", aa->k, "Channels to keep")->capture_default_str();
  axis->add_option("--exclude-layers", aa->exclude, "Layers never ranked (empty string: none)")->capture_default_str();
  axis->add_option("--name", aa->name, "Axis name stored in the output");
  axis->add_option("--neutral-label", aa->neutral, "Neutral label (with --archive)")->capture_default_str();
  axis->add_option("--normalization", aa->normalization, "standardize | mean-only (with --archive)")
      ->capture_default_str();
  axis->add_option("--out", aa->out, "axis JSON")->required();
  axis->callback([aa, &g] {
    if (aa->archive.empty() == aa->relevance.empty()) {
      throw UsageError("give exactly one of --archive or --relevance");
    }
    std::vector<Expression> pos;
    std::vector<Expression> neg;
    std::string name = aa->name;
    if (!aa->preset.empty()) {
      if (!aa->pos.empty() || !aa->neg.empty()) {
        throw UsageError("--preset cannot be combined with --pos/--neg");
      }
      AxisDefinition def;
      if (aa->preset == "mouth") {
        def = mouth_opening_axis();
      } else if (aa->preset == "eye") {
        def = eye_closing_axis();
      } else {
        throw UsageError("--preset must be mouth or eye");
      }
      pos = def.positive;
      neg = def.negative;
      if (name.empty()) name = def.name;
    } else {
      if (aa->pos.empty() || aa->neg.empty()) {
        throw UsageError("--pos and --neg are required without --preset");
      }
      pos = parse_expressions(aa->pos);
      neg = parse_expressions(aa->neg);
    }
    std::map<Expression, ChannelRelevance> rel;
    if (!aa->archive.empty()) {
      std::set<Expression> wanted(pos.begin(), pos.end());
      wanted.insert(neg.begin(), neg.end());
      rel = relevances_from_archive(load_archive(aa->archive), wanted, parse_expression(aa->neutral),
                                    parse_normalization(aa->normalization), nullptr);
    } else {
      for (const auto& file : split_list(aa->relevance)) {
        const auto j = read_json(file);
        for (const auto& r : j.at("relevances")) {
          auto cr = relevance_from_json(r);
          rel.insert_or_assign(cr.expression, std::move(cr));
        }
      }
    }
    std::set<std::size_t> excluded;
    if (!aa->exclude.empty()) {
      const auto layers = editing::parse_layer_list(aa->exclude);
      excluded.insert(layers.begin(), layers.end());
    }
    const auto score = axis_score(rel, pos, neg);
    const auto top = top_k_channels(score, aa->k, excluded, name);
    write_json(aa->out, axis_json(top, score), g);
  });

  auto pa = std::make_shared<ProjectArgs>();
  auto* project = space->add_subcommand("project", "Project records onto one or two motion axes");
  project->add_option("--archive", pa->archive, "Archive directory")->required()->check(CLI::ExistingDirectory);
  project->add_option("--population", pa->population, "Archive for normalisation statistics (default: --archive)")
      ->check(CLI::ExistingDirectory);
  project->add_option("--axes", pa->axes, "x-axis JSON[,y-axis JSON]")->required();
  project->add_option("--split", pa->split, "Only records of this split (train|test)");
  project->add_option("--normalization", pa->normalization, "standardize | mean-only")->capture_default_str();
  project->add_option("--out", pa->out, "scatter.csv (id,expression,x,y)")->required();
  project->add_option("--svg", pa->svg, "Also write a scatter plot");
  project->callback([pa, &g] {
    const auto files = split_list(pa->axes);
    if (files.empty() || files.size() > 2) {
      throw UsageError("--axes takes one or two files");
    }
    std::vector<MotionAxis> axes;
    for (const auto& f : files) {
      axes.push_back(axis_from_json(read_json(f)));
    }
    const auto archive = load_archive(pa->archive);
    const auto pop = population_stats(pa->population.empty() ? archive : load_archive(pa->population));
    const auto mode = parse_normalization(pa->normalization);
    const auto split = pa->split.empty() ? std::optional<Split>{} : parse_split(pa->split);

    std::ostringstream csv;
    csv.precision(17);
    csv << "id,expression,x,y\n";
    std::vector<ScatterPoint> points;
    for (const auto& r : archive.records()) {
      if (split && r.split != *split) {
        continue;
      }
      const double x = axis_projection(r.code, axes[0], pop, mode);
      const double y = axes.size() > 1 ? axis_projection(r.code, axes[1], pop, mode) : 0.0;
      const std::string label = r.expression ? std::string(to_string(*r.expression)) : "";
      csv << r.id << ',' << label << ',' << x << ',' << y << '\n';
      points.push_back({x, y, label});
    }
    write_text(pa->out, csv.str(), g);
    if (!pa->svg.empty()) {
      const auto xl = axes[0].name.empty() ? files[0] : axes[0].name;
      const auto yl = axes.size() > 1 ? (axes[1].name.empty() ? files[1] : axes[1].name) : "";
      write_text(pa->svg, emit_scatter_svg(points, xl, yl), g);
    }
  });
}

}  // namespace latentlens::cli
