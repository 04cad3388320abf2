#include <iostream>
#include <memory>

#include "common.hpp"
#include "latentlens/error.hpp"
#include "latentlens/metrics.hpp"
#include "latentlens/report.hpp"

namespace latentlens::cli {

namespace {

struct EvalArgs {
  std::string pairs;
  std::string masks = "default";
  std::string baseline = "baseline";
  std::string test = "ours";
  std::string out;
};

}  // namespace

void register_metrics(CLI::App& root, const Globals& g) {
  auto* metrics_cmd = root.add_subcommand("metrics", "Region-masked reconstruction metrics");
  metrics_cmd->require_subcommand(1);

  auto ea = std::make_shared<EvalArgs>();
  auto* eval = metrics_cmd->add_subcommand("eval", "Per-expression masked MSE with Holm-adjusted paired t-tests");
  eval->add_option("--pairs", ea->pairs, "JSONL rows {id, expression, method, img, ref}")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--masks", ea->masks, "'default' or a directory of <Expression>.f32 masks")->capture_default_str();
  eval->add_option("--baseline", ea->baseline, "Baseline method name")->capture_default_str();
  eval->add_option("--test", ea->test, "Compared method name")->capture_default_str();
  eval->add_option("--out", ea->out, "report.csv")->required();
  eval->callback([ea, &g] {
    const auto base_dir = fs::path(ea->pairs).parent_path();
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base_dir / p; };
    std::vector<metrics::EvalPair> pairs;
    for (const auto& row : read_jsonl(ea->pairs)) {
      metrics::EvalPair p;
      p.id = row.at("id").get<std::string>();
      p.expression = parse_expression(row.at("expression").get<std::string>());
      p.method = row.at("method").get<std::string>();
      p.img = read_raster(resolve(row.at("img").get<std::string>()));
      p.ref = read_raster(resolve(row.at("ref").get<std::string>()));
      pairs.push_back(std::move(p));
    }
    if (pairs.empty()) {
      throw InvalidArgument("no pairs in " + ea->pairs);
    }
    const auto w = pairs.front().ref.width();
    const auto h = pairs.front().ref.height();
    const auto masks = ea->masks == "default" ? metrics::MaskSet(w, h) : metrics::MaskSet::from_directory(ea->masks, w, h);
    const auto report = metrics::per_expression_report(pairs, ea->baseline, ea->test, masks);
    write_text(ea->out, metrics::report_csv(report), g);
    if (!g.quiet) {
      Expression last = Expression::Neutral;
      for (const auto& row : report.rows) {
        if (row.expression != last) {
          std::cout << metrics::format_expression_line(report, row.expression) << '\n';
          last = row.expression;
        }
      }
    }
  });
}

}  // namespace latentlens::cli
