#include <gtest/gtest.h>

#include <filesystem>

#include "latentlens/error.hpp"
#include "latentlens/metrics.hpp"
#include "latentlens/rng.hpp"

using namespace latentlens;
using namespace latentlens::metrics;

namespace {

Raster random_image(std::size_t w, std::size_t h, std::size_t c, std::uint64_t seed) {
  Rng rng(seed);
  Raster r(w, h, c);
  for (auto& v : r.data()) v = rng.uniform01();
  return r;
}

}  // namespace

TEST(Masks, EyeMaskGeometry) {
  const auto m = eye_mask(256, 256);
  EXPECT_EQ(mask_area(m), 8192u);
  EXPECT_TRUE(m.is_mask());
  for (std::size_t y = 0; y < 256; ++y)
    for (std::size_t x = 0; x < 256; ++x) {
      const bool inside = x >= 64 && x <= 191 && y >= 64 && y <= 127;
      ASSERT_EQ(m.at(x, y), inside ? 1.0 : 0.0) << x << "," << y;
    }
}

TEST(Masks, EyeMaskFourByFour) {
  const auto m = eye_mask(4, 4);
  EXPECT_EQ(mask_area(m), 2u);
  EXPECT_EQ(m.at(1, 1), 1.0);
  EXPECT_EQ(m.at(2, 1), 1.0);
  EXPECT_THROW(eye_mask(3, 8), InvalidArgument);
}

TEST(Masks, MouthAndFaceDefaults) {
  EXPECT_EQ(mask_area(mouth_mask(256, 256)), 128u * (224u - 128u));
  EXPECT_EQ(mask_area(face_mask(256, 256)), 192u * 192u);
}

TEST(MaskedMse, HandExample) {
  const Raster img(2, 2, 1, {1, 0, 0, 0});
  const Raster ref(2, 2, 1, {0, 0, 0, 0});
  const Raster mask(2, 2, 1, {1, 1, 0, 0});
  EXPECT_EQ(masked_mse(img, ref, mask, 10.0), 5.0);
  EXPECT_EQ(mse_outside_mask(img, ref, mask), 0.0);
  EXPECT_EQ(masked_mse(img, img, mask), 0.0);
}

TEST(MaskedMse, AllOnesMaskEqualsPlainMse) {
  const auto a = random_image(17, 9, 3, 1);
  const auto b = random_image(17, 9, 3, 2);
  const Raster ones(17, 9, 1, 1.0);
  EXPECT_NEAR(masked_mse(a, b, ones, 5.0), 5.0 * plain_mse(a, b), 1e-12);
}

TEST(MaskedMse, PartitionIdentity) {
  const auto a = random_image(32, 32, 3, 3);
  const auto b = random_image(32, 32, 3, 4);
  const auto m = eye_mask(32, 32);
  const double area = 32.0 * 32.0;
  const double in = static_cast<double>(mask_area(m));
  EXPECT_NEAR(area * plain_mse(a, b), in * masked_mse(a, b, m) + (area - in) * mse_outside_mask(a, b, m), 1e-12);
}

TEST(MaskedMse, DisjointAdditivity) {
  const auto a = random_image(16, 16, 1, 5);
  const auto b = random_image(16, 16, 1, 6);
  const auto m1 = rect_mask(16, 16, {0, 0, 8, 4});
  const auto m2 = rect_mask(16, 16, {2, 10, 14, 16});
  Raster both(16, 16, 1);
  for (std::size_t i = 0; i < 256; ++i) both.data()[i] = m1.data()[i] + m2.data()[i];
  const double s1 = static_cast<double>(mask_area(m1));
  const double s2 = static_cast<double>(mask_area(m2));
  EXPECT_NEAR((s1 + s2) * masked_mse(a, b, both), s1 * masked_mse(a, b, m1) + s2 * masked_mse(a, b, m2), 1e-12);
}

TEST(MaskedMse, SymmetryAndQuadraticScaling) {
  const auto a = random_image(8, 8, 2, 7);
  const auto b = random_image(8, 8, 2, 8);
  const auto m = eye_mask(8, 8);
  EXPECT_EQ(masked_mse(a, b, m), masked_mse(b, a, m));
  Raster scaled = a;
  for (std::size_t i = 0; i < a.data().size(); ++i) scaled.data()[i] = b.data()[i] + 3.0 * (a.data()[i] - b.data()[i]);
  EXPECT_NEAR(masked_mse(scaled, b, m), 9.0 * masked_mse(a, b, m), 1e-12);
}

TEST(MaskedMse, ConstantDifference) {
  const Raster a(8, 8, 1, 0.7);
  const Raster b(8, 8, 1, 0.2);
  const auto m = eye_mask(8, 8);
  EXPECT_NEAR(masked_mse(a, b, m), 0.25, 1e-15);
  EXPECT_NEAR(mse_outside_mask(a, b, m), 0.25, 1e-15);
}

TEST(MaskedMse, Errors) {
  const Raster a(4, 4, 1);
  EXPECT_THROW(masked_mse(a, Raster(4, 5, 1), eye_mask(4, 4)), LayoutMismatch);
  EXPECT_THROW(masked_mse(a, a, Raster(4, 4, 1, 0.0)), InvalidArgument);
  EXPECT_THROW(mse_outside_mask(a, a, Raster(4, 4, 1, 1.0)), InvalidArgument);
}

TEST(CompositeLoss, Breakdown) {
  const auto a = random_image(8, 8, 3, 9);
  const auto b = random_image(8, 8, 3, 10);
  const auto m = eye_mask(8, 8);
  LossWeights w;
  EXPECT_EQ(w.l2, 1.0);
  EXPECT_EQ(w.lpips, 0.8);
  EXPECT_EQ(w.sim, 0.5);
  w.l2_eye = 10.0;
  const auto same = composite_loss(a, a, w, {}, {}, m);
  EXPECT_EQ(same.total, 0.0);
  const PairMetric mse_standin = [](const Raster& x, const Raster& y) { return plain_mse(x, y); };
  const auto loss = composite_loss(a, b, w, mse_standin, {}, m);
  const double expect = (1.0 + 0.8) * plain_mse(a, b) + 10.0 * masked_mse(a, b, m);
  EXPECT_NEAR(loss.total, expect, 1e-12);
  EXPECT_NEAR(loss.l2_eye, 10.0 * masked_mse(a, b, m), 1e-15);
  EXPECT_EQ(loss.sim, 0.0);
}

TEST(Regions, Assignment) {
  EXPECT_EQ(expression_region(Expression::Blink), Region::Eye);
  EXPECT_EQ(expression_region(Expression::Yawn), Region::Face);
  EXPECT_EQ(expression_region(Expression::Coo), Region::Face);
  EXPECT_EQ(expression_region(Expression::TongueShow), Region::Mouth);
  EXPECT_EQ(expression_region(Expression::LookLeft), Region::Eye);
  EXPECT_THROW(expression_region(Expression::Neutral), InvalidArgument);
  EXPECT_EQ(expression_region_mask(Expression::Blink, 64, 64), eye_mask(64, 64));
  std::size_t counted = 0;
  for (const auto e : kMovementExpressions) {
    expression_region(e);
    ++counted;
  }
  EXPECT_EQ(counted, 16u);
}

TEST(MaskSet, OverrideFromDirectory) {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "latentlens_test_masks";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto custom = rect_mask(16, 16, {0, 0, 2, 2});
  write_raster(custom, dir / "Blink.f32");
  const auto set = MaskSet::from_directory(dir, 16, 16);
  EXPECT_EQ(set.for_expression(Expression::Blink), custom);
  EXPECT_EQ(set.for_expression(Expression::LookUp), eye_mask(16, 16));
  fs::remove_all(dir);
}
