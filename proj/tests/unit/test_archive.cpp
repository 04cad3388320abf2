#include <cmath>

#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "latentlens/archive.hpp"
#include "latentlens/error.hpp"
#include "latentlens/raster.hpp"
#include "latentlens/rng.hpp"

namespace fs = std::filesystem;
using namespace latentlens;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("latentlens_test_" + name);
  fs::remove_all(dir);
  return dir;
}

LatentArchive small_archive() {
  const Layout layout({2, 3});
  std::vector<LatentRecord> records;
  for (int i = 0; i < 4; ++i) {
    LatentRecord r;
    r.id = "rec" + std::to_string(i);
    r.code = StyleCode(layout, {0.5 * i, -1.0, 2.0, 0.125, static_cast<double>(i)});
    if (i % 2 == 0) {
      r.expression = Expression::Scream;
      r.species = Species::Rhesus;
      r.sex = Sex::Female;
      r.age = 3.5;
      r.yaw_deg = -12.0;
      r.source_id = "src" + std::to_string(i / 2);
      r.origin = Origin::Transferred;
      r.split = Split::Test;
    }
    records.push_back(std::move(r));
  }
  return LatentArchive(layout, std::move(records));
}

}  // namespace

TEST(Layout, OffsetsAndFlatIndex) {
  const Layout layout({3, 5, 2});
  EXPECT_EQ(layout.total(), 10u);
  EXPECT_EQ(layout.flat_index(0, 2), 2u);
  EXPECT_EQ(layout.flat_index(1, 0), 3u);
  EXPECT_EQ(layout.flat_index(2, 1), 9u);
  EXPECT_THROW(layout.flat_index(1, 5), InvalidArgument);
  EXPECT_THROW(layout.flat_index(3, 0), InvalidArgument);
  const auto ref = layout.locate(9);
  EXPECT_EQ(ref.layer, 2u);
  EXPECT_EQ(ref.channel, 1u);
}

TEST(StyleCode, RejectsWrongSizeAndNonFinite) {
  const Layout layout({2});
  EXPECT_THROW(StyleCode(layout, {1.0}), LayoutMismatch);
  EXPECT_THROW(StyleCode(layout, {1.0, std::nan("")}), InvalidArgument);
  const StyleCode code(layout, {1.0, 2.0});
  EXPECT_EQ(code.at(0, 1), 2.0);
}

TEST(Archive, RejectsDuplicateIds) {
  const Layout layout({1});
  std::vector<LatentRecord> records(2);
  records[0].id = records[1].id = "x";
  records[0].code = records[1].code = StyleCode(layout);
  EXPECT_THROW(LatentArchive(layout, records), InvalidArgument);
}

TEST(Archive, RoundTripIsBitExactForBinary32Values) {
  const auto original = small_archive();
  const auto dir = scratch("roundtrip");
  write_archive(original, dir);
  const auto loaded = load_archive(dir);
  ASSERT_EQ(loaded.size(), original.size());
  EXPECT_EQ(loaded.layout(), original.layout());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    const auto& a = original[i];
    const auto& b = loaded[i];
    EXPECT_EQ(a.id, b.id);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.expression, b.expression);
    EXPECT_EQ(a.species, b.species);
    EXPECT_EQ(a.sex, b.sex);
    EXPECT_EQ(a.age, b.age);
    EXPECT_EQ(a.yaw_deg, b.yaw_deg);
    EXPECT_EQ(a.split, b.split);
    EXPECT_EQ(a.source_id, b.source_id);
    EXPECT_EQ(a.origin, b.origin);
  }
  fs::remove_all(dir);
}

TEST(Archive, OnDiskFormat) {
  const auto dir = scratch("format");
  write_archive(small_archive(), dir);
  std::ifstream manifest(dir / "manifest.json");
  std::string text((std::istreambuf_iterator<char>(manifest)), {});
  EXPECT_NE(text.find("\"version\":1"), std::string::npos);
  EXPECT_NE(text.find("\"count\":4"), std::string::npos);
  EXPECT_NE(text.find("\"layout\":[2,3]"), std::string::npos);
  EXPECT_NE(text.find("\"dtype\":\"f32le\""), std::string::npos);
  EXPECT_EQ(fs::file_size(dir / "codes.bin"), 4u * 5u * 4u);

  // First value of row 1 is 0.5f, little-endian.
  std::ifstream codes(dir / "codes.bin", std::ios::binary);
  unsigned char bytes[4];
  codes.seekg(5 * 4);
  codes.read(reinterpret_cast<char*>(bytes), 4);
  const std::uint32_t word = bytes[0] | (bytes[1] << 8) | (bytes[2] << 16) | (std::uint32_t{bytes[3]} << 24);
  EXPECT_EQ(std::bit_cast<float>(word), 0.5f);

  std::ifstream labels(dir / "labels.jsonl");
  std::string first;
  std::getline(labels, first);
  EXPECT_EQ(first.find("{\"id\":\"rec0\",\"expression\":\"Scream\""), 0u);
  std::string second;
  std::getline(labels, second);
  EXPECT_NE(second.find("\"expression\":null"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Archive, WriteIsDeterministic) {
  const auto d1 = scratch("det1");
  const auto d2 = scratch("det2");
  write_archive(small_archive(), d1);
  write_archive(small_archive(), d2);
  for (const char* f : {"manifest.json", "codes.bin", "labels.jsonl"}) {
    std::ifstream a(d1 / f, std::ios::binary);
    std::ifstream b(d2 / f, std::ios::binary);
    EXPECT_EQ(std::string((std::istreambuf_iterator<char>(a)), {}), std::string((std::istreambuf_iterator<char>(b)), {}))
        << f;
  }
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST(Archive, LoadErrors) {
  EXPECT_THROW(load_archive(scratch("missing")), IoError);
  const auto dir = scratch("truncated");
  write_archive(small_archive(), dir);
  fs::resize_file(dir / "codes.bin", 10);
  EXPECT_THROW(load_archive(dir), FormatError);
  fs::remove_all(dir);
}

TEST(Archive, PopulationStatsDivideByN) {
  const Layout layout({1});
  std::vector<LatentRecord> records;
  for (int i = 0; i < 4; ++i) {
    LatentRecord r;
    r.id = std::to_string(i);
    r.code = StyleCode(layout, {static_cast<double>(i)});
    records.push_back(r);
  }
  const auto stats = population_stats(LatentArchive(layout, records));
  EXPECT_DOUBLE_EQ(stats.mean[0], 1.5);
  EXPECT_DOUBLE_EQ(stats.std[0], std::sqrt(1.25));
}

TEST(Raster, FileRoundTrip) {
  Raster r(3, 2, 2);
  for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] = 0.125 * static_cast<double>(i);
  const auto path = fs::temp_directory_path() / "latentlens_test_raster.f32";
  write_raster(r, path);
  EXPECT_EQ(read_raster(path), r);
  fs::remove(path);
  fs::remove(raster_sidecar(path));
}

TEST(Record, ExpressionNamesRoundTrip) {
  for (const auto e : kMovementExpressions) {
    EXPECT_EQ(parse_expression(to_string(e)), e);
  }
  EXPECT_EQ(to_string(Expression::BaredTeeth), "Bared-teeth");
  EXPECT_EQ(to_string(Expression::LookLeft), "Look-left");
  EXPECT_THROW(parse_expression("Grin"), FormatError);
  EXPECT_EQ(kMovementExpressions.size(), 16u);
}
