#include <gtest/gtest.h>

#include <cmath>

#include "latentlens/error.hpp"
#include "latentlens/metrics.hpp"
#include "latentlens/synth.hpp"

using namespace latentlens;
using namespace latentlens::synth;

namespace {

PlantedFactorSpec two_factor_spec(double noise) {
  PlantedFactorSpec spec;
  spec.layout = Layout({4, 6});
  spec.base_mean.assign(10, 0.0);
  spec.base_std.assign(10, 1.0);
  spec.noise_std = noise;
  spec.raster_width = 16;
  spec.raster_height = 16;
  spec.factors.push_back({Expression::Scream, {{1, 2}}, 3.0, {4, 8, 12, 14}, 0.1});
  spec.factors.push_back({Expression::Blink, {{1, 4}}, 3.0, {4, 4, 12, 8}, 0.1});
  return spec;
}

}  // namespace

TEST(Synth, NoiseFreePairsDifferOnlyAtPlantedChannel) {
  const auto data = generate_dataset(two_factor_spec(0.0), 20, 1);
  const auto& a = data.archive;
  ASSERT_EQ(a.size(), 80u);
  for (std::size_t i = 0; i < a.size(); i += 2) {
    const auto& neutral = a[i];
    const auto& pos = a[i + 1];
    ASSERT_EQ(neutral.expression, Expression::Neutral);
    ASSERT_EQ(neutral.source_id, pos.source_id);
    const std::size_t planted = *pos.expression == Expression::Scream ? 6 : 8;
    for (std::size_t c = 0; c < 10; ++c) {
      const double d = pos.code[c] - neutral.code[c];
      if (c == planted) {
        EXPECT_NEAR(d, 3.0, 1e-12);
      } else {
        EXPECT_EQ(d, 0.0);
      }
    }
  }
}

TEST(Synth, SeedDeterminism) {
  const auto a = generate_dataset(two_factor_spec(1.0), 10, 5).archive;
  const auto b = generate_dataset(two_factor_spec(1.0), 10, 5).archive;
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].code, b[i].code);
}

TEST(Synth, EmpiricalShiftWithinThreeStandardErrors) {
  auto spec = two_factor_spec(1.0);
  spec.factors.resize(1);
  spec.factors[0].effect_size = 2.0;
  const std::size_t n = 500;
  const auto a = generate_dataset(spec, n, 17).archive;
  double pos = 0.0, neg = 0.0;
  for (std::size_t i = 0; i < a.size(); i += 2) {
    neg += a[i].code[6];
    pos += a[i + 1].code[6];
  }
  // Each class mean has variance (1 + 1) / n; the shared base draw cancels in
  // the difference, leaving independent noise of variance 2 * 1 / n.
  const double se = std::sqrt(2.0 / n);
  EXPECT_NEAR((pos - neg) / n, 2.0, 3.0 * se);
}

TEST(Synth, GroundTruthIsUnitVectorOnPlantedChannels) {
  const auto data = generate_dataset(two_factor_spec(1.0), 2, 0);
  ASSERT_EQ(data.truth.size(), 2u);
  EXPECT_EQ(data.truth[0].direction[6], 1.0);
  double norm = 0.0;
  for (const double v : data.truth[0].direction) norm += v * v;
  EXPECT_DOUBLE_EQ(norm, 1.0);
}

TEST(Synth, RenderZeroCodeIsBackground) {
  const auto spec = two_factor_spec(1.0);
  const auto r = render(StyleCode(spec.layout), spec);
  for (const double v : r.data()) EXPECT_EQ(v, spec.background);
}

TEST(Synth, ShiftingPlantedChannelChangesOnlyItsRegion) {
  const auto spec = two_factor_spec(1.0);
  StyleCode code(spec.layout);
  const auto before = render(code, spec);
  code.set(8, 2.0);  // Blink channel
  const auto after = render(code, spec);
  for (std::size_t y = 0; y < 16; ++y)
    for (std::size_t x = 0; x < 16; ++x) {
      const bool inside = spec.factors[1].region.contains(x, y);
      EXPECT_DOUBLE_EQ(after.at(x, y) - before.at(x, y), inside ? 0.1 * 2.0 : 0.0);
    }
}

TEST(Synth, MaskedErrorSeesOnlyEyeFactors) {
  auto spec = two_factor_spec(1.0);
  spec.factors[0].region = {4, 8, 12, 14};  // mouth rows
  spec.factors[1].region = {4, 4, 12, 8};   // eye rows [H/4, H/2)
  const auto eye = metrics::eye_mask(16, 16);
  StyleCode a(spec.layout);
  StyleCode mouth_changed = a;
  mouth_changed.set(6, 1.0);
  StyleCode eye_changed = a;
  eye_changed.set(8, 1.0);
  EXPECT_EQ(metrics::masked_mse(render(a, spec), render(mouth_changed, spec), eye), 0.0);
  EXPECT_GT(metrics::masked_mse(render(a, spec), render(eye_changed, spec), eye), 0.0);
}

TEST(Synth, SpecValidation) {
  auto spec = two_factor_spec(1.0);
  spec.factors[0].channels = {{5, 0}};
  EXPECT_THROW(spec.validate(), InvalidArgument);
  spec = two_factor_spec(1.0);
  spec.factors[1].name = Expression::Scream;
  EXPECT_THROW(spec.validate(), InvalidArgument);
  spec = two_factor_spec(1.0);
  spec.factors.clear();
  EXPECT_THROW(generate_dataset(spec, 5, 0), InvalidArgument);
  spec = two_factor_spec(1.0);
  spec.factors[0].region = {0, 0, 17, 4};
  EXPECT_THROW(spec.validate(), InvalidArgument);
}

TEST(Synth, ParseSpecJson) {
  const auto spec = parse_spec(R"({"layout":[3,3],"base_mean":0.5,"base_std":[1,1,1,2,2,2],
    "raster":{"w":8,"h":8},"factors":[{"name":"Yawn","channels":[[1,1]],"effect_size":2,"region":[0,0,4,4]}]})");
  EXPECT_EQ(spec.layout.total(), 6u);
  EXPECT_EQ(spec.base_mean[5], 0.5);
  EXPECT_EQ(spec.base_std[4], 2.0);
  EXPECT_EQ(spec.factors[0].name, Expression::Yawn);
  EXPECT_THROW(parse_spec("{"), FormatError);
}
