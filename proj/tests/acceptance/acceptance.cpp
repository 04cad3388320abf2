// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are the contract values; do not loosen them.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "latentlens/archive.hpp"
#include "latentlens/curation/entropy.hpp"
#include "latentlens/curation/sampling.hpp"
#include "latentlens/editing.hpp"
#include "latentlens/metrics.hpp"
#include "latentlens/report.hpp"
#include "latentlens/rng.hpp"
#include "latentlens/stylespace.hpp"
#include "latentlens/synth.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace latentlens;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

PointMatrix rows_to_matrix(const std::vector<std::vector<double>>& rows) { return PointMatrix::from_rows(rows); }

// 1 ---------------------------------------------------------------------------
Outcome entropy_calibration() {
  Rng rng(20240601);
  std::vector<std::vector<double>> normal(10000, std::vector<double>(1));
  std::vector<std::vector<double>> uniform(10000, std::vector<double>(1));
  for (auto& r : normal) r[0] = rng.normal();
  for (auto& r : uniform) r[0] = rng.uniform01();

  auto t0 = Clock::now();
  const double hn = curation::knn_entropy(rows_to_matrix(normal), 3).value;
  const double tn = seconds_since(t0);
  t0 = Clock::now();
  const double hu = curation::knn_entropy(rows_to_matrix(uniform), 3).value;
  const double tu = seconds_since(t0);

  const double target = oracle::normal_entropy();
  const bool ok = std::abs(hn - target) <= 0.05 && std::abs(hu) <= 0.05 && tn < 10.0 && tu < 10.0;
  return {ok, fmt("normal %.4f (target %.4f), uniform %.4f (target 0), %.2fs / %.2fs", hn, target, hu, tn, tu)};
}

// 2 ---------------------------------------------------------------------------
Outcome kl_exact_laws() {
  double worst_translation = 0.0;
  double worst_scaling = 0.0;
  for (const std::size_t d : {1u, 3u}) {
    const auto rows = oracle::normal_rows(2000, d, 100 + d);
    const double base = curation::knn_entropy(rows_to_matrix(rows), 3).value;

    auto shifted = rows;
    for (auto& r : shifted)
      for (std::size_t c = 0; c < d; ++c) r[c] += 0.375 * static_cast<double>(c + 1);
    worst_translation =
        std::max(worst_translation, std::abs(curation::knn_entropy(rows_to_matrix(shifted), 3).value - base));

    for (const double a : {0.5, 2.0, 10.0}) {
      auto scaled = rows;
      for (auto& r : scaled)
        for (auto& v : r) v *= a;
      const double h = curation::knn_entropy(rows_to_matrix(scaled), 3).value;
      worst_scaling = std::max(worst_scaling, std::abs(h - (base + static_cast<double>(d) * std::log(a))));
    }
  }
  // "bit-near": a few ulps of an O(1) value.
  const bool ok = worst_translation <= 1e-12 && worst_scaling <= 1e-9;
  return {ok, fmt("max |H(X+c)-H(X)| = %.2e, max scaling-law error = %.2e", worst_translation, worst_scaling)};
}

// 3 ---------------------------------------------------------------------------
Outcome jackknife_checks() {
  Rng rng(77);
  std::vector<double> x(1000);
  for (auto& v : x) v = rng.normal();
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  auto mean_stat = [&](std::span<const std::size_t> kept) {
    double s = 0.0;
    for (const auto i : kept) s += x[i];
    return s / static_cast<double>(kept.size());
  };
  const double linear_err = std::abs(curation::jackknife(x.size(), curation::kDefaultJackknifeGroups, 5, mean_stat).estimate - mean);

  // Divide-by-N variance on n = 100; 300 folds cannot exceed n, so the
  // fold count is min(300, n) = 100.
  const std::size_t n = 100;
  const std::size_t groups = std::min(curation::kDefaultJackknifeGroups, n);
  int closer = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng r(1000 + seed);
    std::vector<double> y(n);
    for (auto& v : y) v = r.normal();
    auto var_n = [&](std::span<const std::size_t> kept) {
      double m = 0.0;
      for (const auto i : kept) m += y[i];
      m /= static_cast<double>(kept.size());
      double s = 0.0;
      for (const auto i : kept) s += (y[i] - m) * (y[i] - m);
      return s / static_cast<double>(kept.size());
    };
    const auto jk = curation::jackknife(n, groups, seed, var_n);
    const double unbiased = jk.full * static_cast<double>(n) / static_cast<double>(n - 1);
    closer += std::abs(jk.estimate - unbiased) < std::abs(jk.full - unbiased) ? 1 : 0;
  }
  const bool ok = linear_err <= 1e-12 && closer >= 27;
  return {ok, fmt("linear statistic error %.2e; variance bias-corrected closer in %d/30 trials", linear_err, closer)};
}

// 4 ---------------------------------------------------------------------------
Outcome sampling_correctness() {
  const auto three = PointMatrix::from_rows(std::vector<std::vector<double>>{{0.0}, {1.0}, {10.0}});
  const int trials = 100000;
  int far = 0;
  for (int t = 0; t < trials; ++t) {
    curation::SamplingOptions opt;
    opt.n = 2;
    opt.seed = static_cast<std::uint64_t>(t);
    opt.first_index = 0;
    far += curation::weighted_diversity_sample(three, opt).indices[1] == 2 ? 1 : 0;
  }
  const double p = 100.0 / 101.0;
  const double sigma = std::sqrt(p * (1.0 - p) / trials);
  const double freq = static_cast<double>(far) / trials;
  const bool freq_ok = std::abs(freq - p) <= 3.0 * sigma;

  const auto pts = rows_to_matrix(oracle::normal_rows(500, 4, 9));
  curation::SamplingOptions full;
  full.n = 500;
  full.seed = 4;
  auto perm = curation::weighted_diversity_sample(pts, full).indices;
  std::sort(perm.begin(), perm.end());
  bool is_perm = true;
  for (std::size_t i = 0; i < perm.size(); ++i) is_perm = is_perm && perm[i] == i;

  auto serialize = [&](std::uint64_t seed) {
    curation::SamplingOptions opt;
    opt.n = 100;
    opt.seed = seed;
    const auto sel = curation::weighted_diversity_sample(pts, opt);
    std::string bytes(reinterpret_cast<const char*>(sel.indices.data()), sel.indices.size() * sizeof(std::size_t));
    return bytes;
  };
  const bool deterministic = serialize(123) == serialize(123) && serialize(123) != serialize(124);

  return {freq_ok && is_perm && deterministic,
          fmt("far-point frequency %.5f vs %.5f (3 sigma = %.5f); n=N permutation %s; seed determinism %s", freq, p,
              3.0 * sigma, is_perm ? "yes" : "no", deterministic ? "yes" : "no")};
}

// 5 ---------------------------------------------------------------------------
Outcome diversity_gain() {
  const auto t0 = Clock::now();
  const std::size_t n = 50000;
  const std::size_t d = 8;
  Rng rng(555);
  PointMatrix mixture(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    const bool rare = rng.uniform01() < 0.01;
    for (std::size_t c = 0; c < d; ++c) mixture.row(i)[c] = rng.normal() + (rare ? 8.0 : 0.0);
  }
  double weighted = 0.0;
  double uniform = 0.0;
  const int seeds = 30;
  for (int s = 0; s < seeds; ++s) {
    curation::SamplingOptions opt;
    opt.n = 500;
    opt.seed = static_cast<std::uint64_t>(s);
    auto w = curation::weighted_diversity_sample(mixture, opt).indices;
    auto u = curation::uniform_sample(n, 500, static_cast<std::uint64_t>(s));
    std::sort(w.begin(), w.end());
    std::sort(u.begin(), u.end());
    weighted += curation::jackknife_entropy(mixture.select(w), 3, 300, s).value / seeds;
    uniform += curation::jackknife_entropy(mixture.select(u), 3, 300, s).value / seeds;
  }
  const double elapsed = seconds_since(t0);
  return {weighted > uniform && elapsed < 120.0,
          fmt("mean entropy weighted %.3f vs uniform %.3f nats over 30 seeds, %.1fs", weighted, uniform, elapsed)};
}

synth::PlantedFactorSpec planted_spec(const Layout& layout, std::vector<synth::Factor> factors) {
  synth::PlantedFactorSpec spec;
  spec.layout = layout;
  spec.base_mean.assign(layout.total(), 0.0);
  spec.base_std.assign(layout.total(), 1.0);
  spec.noise_std = 1.0;
  spec.raster_width = spec.raster_height = 64;
  spec.factors = std::move(factors);
  return spec;
}

// 6 ---------------------------------------------------------------------------
Outcome boundary_recovery() {
  const auto t0 = Clock::now();
  const Layout layout({512});
  int hits = 0;
  double worst = 1.0;
  bool antisymmetric = true;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng pick(seed);
    const std::size_t channel = static_cast<std::size_t>(pick.bounded(512));
    const auto spec = planted_spec(layout, {{Expression::Scream, {{0, channel}}, 2.0, {0, 0, 8, 8}, 0.1}});
    const auto data = synth::generate_dataset(spec, 500, seed);
    std::vector<StyleCode> pos, neg;
    for (const auto& r : data.archive.records()) (*r.expression == Expression::Scream ? pos : neg).push_back(r.code);
    const auto b = editing::fit_boundary(pos, neg);
    const double cos = oracle::cosine(b.normal, data.truth[0].direction);
    worst = std::min(worst, cos);
    hits += cos >= 0.95 ? 1 : 0;
    if (seed == 0) {
      const auto swapped = editing::fit_boundary(neg, pos);
      for (std::size_t i = 0; i < b.normal.size(); ++i) antisymmetric = antisymmetric && b.normal[i] == -swapped.normal[i];
      antisymmetric = antisymmetric && b.offset == -swapped.offset;
    }
  }
  return {hits >= 95 && antisymmetric, fmt("cosine >= 0.95 in %d/100 seeds (min %.4f); label swap negates exactly: %s; %.1fs",
                                           hits, worst, antisymmetric ? "yes" : "no", seconds_since(t0))};
}

// 7 ---------------------------------------------------------------------------
Outcome stylespace_recovery() {
  using namespace stylespace;
  const Layout layout(std::vector<std::size_t>(9, 512));
  const auto mouth_def = mouth_opening_axis();
  const auto eye_def = eye_closing_axis();
  auto restrict_to = [](const std::vector<Expression>& set, const std::map<Expression, ChannelRelevance>& rel) {
    std::vector<Expression> out;
    for (const auto e : set)
      if (rel.contains(e)) out.push_back(e);
    return out;
  };
  int mouth_hits = 0;
  int eye_hits = 0;
  bool exact_antisymmetry = true;
  bool cancels = true;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng pick(seed + 7);
    const ChannelRef mouth{1 + pick.bounded(8), pick.bounded(512)};
    ChannelRef eye{1 + pick.bounded(8), pick.bounded(512)};
    while (eye == mouth) eye = {1 + pick.bounded(8), pick.bounded(512)};
    const auto spec = planted_spec(layout, {{Expression::Scream, {mouth}, 2.0, {16, 32, 48, 56}, 0.1},
                                            {Expression::Blink, {eye}, 2.0, {16, 16, 48, 32}, 0.1}});
    const auto data = synth::generate_dataset(spec, 50, seed);
    const auto pop = population_stats(data.archive);
    std::map<Expression, ChannelRelevance> rel;
    for (const auto e : {Expression::Scream, Expression::Blink})
      rel[e] = channel_relevance(differential_set(data.archive, e, pop));

    const auto mp = restrict_to(mouth_def.positive, rel);
    const auto mn = restrict_to(mouth_def.negative, rel);
    const auto ep = restrict_to(eye_def.positive, rel);
    const auto en = restrict_to(eye_def.negative, rel);
    const auto mouth_score = axis_score(rel, mp, mn);
    const auto eye_score = axis_score(rel, ep, en);
    const auto m_top = top_k_channels(mouth_score, 5).top.front();
    const auto e_top = top_k_channels(eye_score, 5).top.front();
    mouth_hits += (m_top.layer == mouth.layer && m_top.channel == mouth.channel) ? 1 : 0;
    eye_hits += (e_top.layer == eye.layer && e_top.channel == eye.channel) ? 1 : 0;

    const auto reversed = axis_score(rel, mn, mp);
    for (std::size_t i = 0; i < layout.total(); ++i)
      exact_antisymmetry = exact_antisymmetry && mouth_score.theta_r[i] == -reversed.theta_r[i];
    AxisOptions bypass;
    bypass.allow_overlap = true;
    for (const double v : axis_score(rel, mp, mp, bypass).theta_r) cancels = cancels && v == 0.0;
  }
  return {mouth_hits >= 95 && eye_hits >= 95 && exact_antisymmetry && cancels,
          fmt("top-1 correct: mouth %d/100, eye %d/100; exact antisymmetry %s; pos==neg gives 0: %s", mouth_hits,
              eye_hits, exact_antisymmetry ? "yes" : "no", cancels ? "yes" : "no")};
}

// 8 ---------------------------------------------------------------------------
Outcome masked_loss_oracle() {
  using namespace metrics;
  const Raster img(2, 2, 1, {1, 0, 0, 0});
  const Raster ref(2, 2, 1, {0, 0, 0, 0});
  const Raster mask(2, 2, 1, {1, 1, 0, 0});
  const double hand = masked_mse(img, ref, mask, 10.0);

  Rng rng(8);
  Raster a(64, 48, 3);
  Raster b(64, 48, 3);
  for (auto& v : a.data()) v = rng.uniform01();
  for (auto& v : b.data()) v = rng.uniform01();
  const Raster ones(64, 48, 1, 1.0);
  const double ones_err = std::abs(masked_mse(a, b, ones, 10.0) - 10.0 * plain_mse(a, b));

  const auto eye256 = eye_mask(256, 256);
  double eye_sum = 0.0;
  for (const double v : eye256.data()) eye_sum += v;

  const auto eye = eye_mask(64, 48);
  const double area = 64.0 * 48.0;
  const double in = static_cast<double>(mask_area(eye));
  const double partition_err =
      std::abs(area * plain_mse(a, b) - (in * masked_mse(a, b, eye) + (area - in) * mse_outside_mask(a, b, eye)));

  const bool ok = hand == 5.0 && ones_err <= 1e-12 && eye_sum == 8192.0 && partition_err <= 1e-12;
  return {ok, fmt("2x2 example = %.17g; all-ones error %.2e; eye_mask(256,256) sum %.0f; partition error %.2e", hand,
                  ones_err, eye_sum, partition_err)};
}

// 9 ---------------------------------------------------------------------------
Outcome statistics() {
  using namespace metrics;
  const auto holm = holm_adjust(std::vector<double>{0.01, 0.04});
  const bool holm_ok = std::abs(holm[0] - 0.02) < 1e-15 && std::abs(holm[1] - 0.04) < 1e-15;

  std::vector<EvalPair> pairs;
  Rng rng(9);
  for (const auto e : kMovementExpressions) {
    for (int i = 0; i < 20; ++i) {
      Raster ref(32, 32, 3);
      for (auto& v : ref.data()) v = rng.uniform01();
      Raster base = ref;
      for (auto& v : base.data()) v += 0.05 * rng.normal();
      Raster injected = base;
      for (auto& v : injected.data()) v += 0.1;
      const auto id = std::string(to_string(e)) + "-" + std::to_string(i);
      pairs.push_back({id, e, "baseline", base, ref});
      pairs.push_back({id, e, "injected", injected, ref});
    }
  }
  const auto report = per_expression_report(pairs, "baseline", "injected", MaskSet(32, 32));
  std::size_t flagged = 0;
  double worst = 0.0;
  for (const auto& row : report.rows) {
    if (row.method == "injected") {
      flagged += row.p_holm < 0.01 ? 1 : 0;
      worst = std::max(worst, row.p_holm);
    }
  }
  return {holm_ok && flagged == kMovementExpressions.size(),
          fmt("Holm {0.01,0.04} -> {%.3g,%.3g}; %zu/%zu expressions flagged, max adjusted p %.2e", holm[0], holm[1],
              flagged, kMovementExpressions.size(), worst)};
}

// 10 --------------------------------------------------------------------------
Outcome editing_identities() {
  using namespace editing;
  const Layout layout(std::vector<std::size_t>(9, 64));
  Rng rng(10);
  auto random_code = [&] {
    std::vector<double> v(layout.total());
    for (auto& x : v) x = rng.normal();
    return StyleCode(layout, std::move(v));
  };
  AttributeBoundary boundary;
  boundary.layout = layout;
  {
    const auto n = random_code();
    double norm = 0.0;
    for (const double v : n.flat()) norm += v * v;
    for (const double v : n.flat()) boundary.normal.push_back(v / std::sqrt(norm));
  }
  int morph_bad = 0, mix_bad = 0, additivity_bad = 0;
  double additivity_worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const auto a = random_code();
    const auto b = random_code();
    morph_bad += (morph(a, b, 0.0) == a && morph(a, b, 1.0) == b) ? 0 : 1;

    std::vector<std::size_t> layers, complement;
    for (std::size_t l = 0; l < 9; ++l) (rng.uniform01() < 0.5 ? layers : complement).push_back(l);
    mix_bad += style_mix(a, b, layers) == style_mix(b, a, complement) ? 0 : 1;

    const double s = 4.0 * rng.normal();
    const double u = 4.0 * rng.normal();
    const auto twice = linear_edit(linear_edit(a, boundary, s), boundary, u);
    const auto once = linear_edit(a, boundary, s + u);
    if (!(twice == once)) {
      ++additivity_bad;
      for (std::size_t i = 0; i < layout.total(); ++i)
        additivity_worst = std::max(additivity_worst, std::abs(twice[i] - once[i]));
    }
  }
  return {morph_bad == 0 && mix_bad == 0 && additivity_bad == 0,
          fmt("morph endpoint violations %d/1000; style-mix complement violations %d/1000; "
              "linear-edit additivity exact in %d/1000 (max deviation %.2e, floating-point rounding)",
              morph_bad, mix_bad, 1000 - additivity_bad, additivity_worst)};
}

// 11 --------------------------------------------------------------------------
Outcome end_to_end() {
  const auto t0 = Clock::now();
  const auto dir = fs::temp_directory_path() / "latentlens_acceptance_e2e";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "spec.json") << R"({"layout":[512,512,512,512,512,512,512,512,512],
    "base_mean":0.0,"base_std":1.0,"noise_std":1.0,"raster":{"w":64,"h":64},
    "factors":[{"name":"Scream","channels":[[2,81]],"effect_size":2.0,"region":[16,32,48,56]},
               {"name":"Blink","channels":[[4,300]],"effect_size":2.0,"region":[16,16,48,32]}]})";
  const std::string cli = LATENTLENS_CLI_PATH;
  const std::string d = dir.string() + "/";
  const std::vector<std::string> steps = {
      "synth generate --spec " + d + "spec.json --n 100 --seed 11 --out " + d + "archive",
      "curate sample --archive " + d + "archive --n 200 --seed 11 --out " + d + "selection.json",
      "edit boundary --archive " + d + "archive --selection " + d +
          "selection.json --attr expression=Scream --neg expression=Neutral --out " + d + "boundary.json",
      "space axis --archive " + d + "archive --pos Scream --neg Blink --k 5 --exclude-layers 0 --name mouth --out " +
          d + "axis_mouth.json",
      "space axis --archive " + d + "archive --pos Blink --neg Scream --k 5 --exclude-layers 0 --name eye --out " + d +
          "axis_eye.json",
      "space project --archive " + d + "archive --axes " + d + "axis_mouth.json," + d + "axis_eye.json --out " + d +
          "scatter.csv --svg " + d + "scatter.svg",
  };
  for (const auto& step : steps) {
    const int rc = std::system((cli + " --quiet " + step).c_str());
    if (rc != 0) {
      return {false, fmt("step failed (status %d): %s", rc, step.c_str())};
    }
  }
  auto load = [](const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
  };
  const auto truth = load(dir / "archive" / "ground_truth.json");
  const auto mouth = load(dir / "axis_mouth.json");
  const auto eye = load(dir / "axis_eye.json");
  auto matches = [](const nlohmann::json& axis, const nlohmann::json& factor) {
    return axis["top"][0]["layer"] == factor["channels"][0][0] && axis["top"][0]["channel"] == factor["channels"][0][1];
  };
  const bool recovered = matches(mouth, truth["factors"][0]) && matches(eye, truth["factors"][1]);
  const bool svg = fs::exists(dir / "scatter.svg") && fs::file_size(dir / "scatter.svg") > 0;
  const double elapsed = seconds_since(t0);
  fs::remove_all(dir);
  return {recovered && svg && elapsed < 60.0,
          fmt("5 stages exit 0; mouth top-1 (%d,%d), eye top-1 (%d,%d) vs planted (2,81), (4,300); %.1fs",
              mouth["top"][0]["layer"].get<int>(), mouth["top"][0]["channel"].get<int>(),
              eye["top"][0]["layer"].get<int>(), eye["top"][0]["channel"].get<int>(), elapsed)};
}

// 12 --------------------------------------------------------------------------
Outcome archive_round_trip() {
  const Layout layout(std::vector<std::size_t>(9, 512));
  Rng rng(12);
  std::vector<LatentRecord> records;
  records.reserve(10000);
  for (std::size_t i = 0; i < 10000; ++i) {
    std::vector<double> v(layout.total());
    for (auto& x : v) x = static_cast<float>(rng.normal());  // binary32-representable
    LatentRecord r;
    r.id = "img-" + std::to_string(i);
    r.code = StyleCode(layout, std::move(v));
    r.expression = kMovementExpressions[i % 16];
    r.source_id = "src-" + std::to_string(i / 4);
    r.split = i % 20 == 0 ? Split::Test : Split::Train;
    r.age = static_cast<double>(i % 30) / 2.0;
    records.push_back(std::move(r));
  }
  const LatentArchive archive(layout, std::move(records));
  const auto dir = fs::temp_directory_path() / "latentlens_acceptance_archive";
  fs::remove_all(dir);
  const auto t0 = Clock::now();
  write_archive(archive, dir);
  const auto loaded = load_archive(dir);
  const double elapsed = seconds_since(t0);
  bool exact = loaded.size() == archive.size() && loaded.layout() == archive.layout();
  for (std::size_t i = 0; exact && i < archive.size(); ++i) {
    const auto& a = archive[i];
    const auto& b = loaded[i];
    exact = a.id == b.id && a.code == b.code && a.expression == b.expression && a.source_id == b.source_id &&
            a.split == b.split && a.age == b.age;
  }
  fs::remove_all(dir);
  return {exact && elapsed < 5.0, fmt("10000 x 9x512 records, bit-exact %s, write+load %.2fs", exact ? "yes" : "no", elapsed)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "entropy calibration", entropy_calibration},
      {2, "KL estimator exact laws", kl_exact_laws},
      {3, "jackknife", jackknife_checks},
      {4, "diversity sampling correctness", sampling_correctness},
      {5, "diversity vs uniform entropy gain", diversity_gain},
      {6, "boundary recovery", boundary_recovery},
      {7, "channel relevance recovery", stylespace_recovery},
      {8, "masked loss oracle", masked_loss_oracle},
      {9, "statistics", statistics},
      {10, "editing identities", editing_identities},
      {11, "end-to-end pipeline", end_to_end},
      {12, "archive round-trip", archive_round_trip},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
