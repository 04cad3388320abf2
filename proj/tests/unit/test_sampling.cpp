#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "latentlens/curation/sampling.hpp"
#include "latentlens/error.hpp"
#include "oracles.hpp"

using namespace latentlens;
using namespace latentlens::curation;

namespace {

PointMatrix line(std::initializer_list<double> xs) {
  std::vector<std::vector<double>> rows;
  for (const double x : xs) rows.push_back({x});
  return PointMatrix::from_rows(rows);
}

}  // namespace

TEST(Sampling, ThreePointSecondDrawWeights) {
  // Points {0, 1, 10}, first pick forced to 0: squared distances 1 and 100.
  SamplingOptions opt;
  opt.n = 2;
  opt.first_index = 0;
  opt.record_weights = true;
  const auto sel = weighted_diversity_sample(line({0, 1, 10}), opt);
  ASSERT_EQ(sel.draw_weights.size(), 1u);
  EXPECT_DOUBLE_EQ(sel.draw_weights[0][0], 0.0);
  EXPECT_DOUBLE_EQ(sel.draw_weights[0][1], 1.0 / 101.0);
  EXPECT_DOUBLE_EQ(sel.draw_weights[0][2], 100.0 / 101.0);
}

TEST(Sampling, ExponentOneUsesRawDistance) {
  SamplingOptions opt;
  opt.n = 2;
  opt.first_index = 0;
  opt.exponent = 1.0;
  opt.record_weights = true;
  const auto sel = weighted_diversity_sample(line({0, 1, 10}), opt);
  EXPECT_DOUBLE_EQ(sel.draw_weights[0][1], 1.0 / 11.0);
  EXPECT_DOUBLE_EQ(sel.draw_weights[0][2], 10.0 / 11.0);
}

TEST(Sampling, NoRepeatsAndExactLength) {
  const auto pts = oracle::to_matrix(oracle::normal_rows(200, 4, 1));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SamplingOptions opt;
    opt.n = 50;
    opt.seed = seed;
    const auto sel = weighted_diversity_sample(pts, opt);
    ASSERT_EQ(sel.indices.size(), 50u);
    EXPECT_EQ(std::set<std::size_t>(sel.indices.begin(), sel.indices.end()).size(), 50u);
  }
}

TEST(Sampling, FullSizeIsPermutation) {
  const auto pts = oracle::to_matrix(oracle::normal_rows(64, 3, 2));
  SamplingOptions opt;
  opt.n = 64;
  opt.seed = 5;
  auto idx = weighted_diversity_sample(pts, opt).indices;
  std::sort(idx.begin(), idx.end());
  for (std::size_t i = 0; i < idx.size(); ++i) EXPECT_EQ(idx[i], i);
}

TEST(Sampling, DuplicatePointsFallBackToUniform) {
  // All points identical: every draw after the first has zero total weight.
  const auto pts = line({3, 3, 3, 3});
  SamplingOptions opt;
  opt.n = 4;
  const auto sel = weighted_diversity_sample(pts, opt);
  EXPECT_EQ(sel.uniform_fallbacks, 3u);
  EXPECT_EQ(std::set<std::size_t>(sel.indices.begin(), sel.indices.end()).size(), 4u);
}

TEST(Sampling, SeedDeterminism) {
  const auto pts = oracle::to_matrix(oracle::normal_rows(300, 5, 3));
  SamplingOptions opt;
  opt.n = 40;
  opt.seed = 99;
  EXPECT_EQ(weighted_diversity_sample(pts, opt).indices, weighted_diversity_sample(pts, opt).indices);
  opt.seed = 100;
  const auto other = weighted_diversity_sample(pts, opt).indices;
  opt.seed = 99;
  EXPECT_NE(weighted_diversity_sample(pts, opt).indices, other);
}

TEST(Sampling, RejectsOversizedRequest) {
  SamplingOptions opt;
  opt.n = 4;
  EXPECT_THROW(weighted_diversity_sample(line({0, 1, 2}), opt), InvalidArgument);
}

TEST(Sampling, UniformSampleIsDistinct) {
  const auto idx = uniform_sample(100, 30, 4);
  EXPECT_EQ(idx.size(), 30u);
  EXPECT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), 30u);
  EXPECT_EQ(idx, uniform_sample(100, 30, 4));
}
