#include "lotpoly/png_io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

namespace lotpoly {
namespace {

namespace fs = std::filesystem;

class PngIoTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / "lotpoly_png_test";
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(PngIoTest, AllZeroFullTile) {
  const fs::path p = dir_ / "zeros.png";
  write_mask_png(BinaryMask(512, 512, std::uint8_t{0}), p);
  BinaryMask m = read_mask_png(p);
  EXPECT_EQ(m.width(), 512);
  EXPECT_EQ(m.height(), 512);
  EXPECT_EQ(m.count_ones(), 0u);
}

TEST_F(PngIoTest, MaskRoundTripBitExact) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> bit(0, 1);
  std::vector<std::uint8_t> v(64 * 48);
  for (auto& b : v) b = static_cast<std::uint8_t>(bit(rng));
  BinaryMask m(64, 48, v);
  const fs::path p = dir_ / "rt.png";
  write_mask_png(m, p);
  EXPECT_EQ(read_mask_png(p), m);
}

TEST_F(PngIoTest, Value255MapsToOne) {
  BandGrid g(8, 8, 0);
  g.set(3, 4, 255);
  const fs::path p = dir_ / "m255.png";
  write_band_png(g, p);
  BinaryMask m = read_mask_png(p);
  EXPECT_EQ(m.at(3, 4), 1);
  EXPECT_EQ(m.count_ones(), 1u);
}

TEST_F(PngIoTest, OtherValuesRejected) {
  BandGrid g(4, 4, 0);
  g.set(1, 1, 7);
  const fs::path p = dir_ / "bad.png";
  write_band_png(g, p);
  EXPECT_THROW(read_mask_png(p), ValidationError);
}

TEST_F(PngIoTest, TruncatedFileIsIoError) {
  const fs::path p = dir_ / "trunc.png";
  write_mask_png(BinaryMask(64, 64, std::uint8_t{1}), p);
  const auto size = fs::file_size(p);
  fs::resize_file(p, size / 2);
  EXPECT_THROW(read_mask_png(p), IoError);
}

TEST_F(PngIoTest, MissingFileIsIoError) {
  EXPECT_THROW(read_mask_png(dir_ / "nope.png"), IoError);
}

TEST_F(PngIoTest, RgbaRoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> byte(0, 255);
  std::vector<BandGrid> bands;
  for (int b = 0; b < 4; ++b) {
    std::vector<std::uint8_t> v(16 * 16);
    for (auto& x : v) x = static_cast<std::uint8_t>(byte(rng));
    bands.emplace_back(16, 16, std::move(v));
  }
  MultiBandImage img(bands);
  const fs::path p = dir_ / "rgba.png";
  write_image_png(img, p);
  MultiBandImage back = read_image_png(p);
  ASSERT_EQ(back.band_count(), 4);
  for (int b = 0; b < 4; ++b) EXPECT_EQ(back.band(b), img.band(b));
}

TEST_F(PngIoTest, RgbRoundTrip) {
  std::vector<BandGrid> bands{BandGrid(8, 8, 1), BandGrid(8, 8, 2), BandGrid(8, 8, 3)};
  MultiBandImage img(bands);
  const fs::path p = dir_ / "rgb.png";
  write_image_png(img, p);
  MultiBandImage back = read_image_png(p);
  ASSERT_EQ(back.band_count(), 3);
  for (int b = 0; b < 3; ++b) EXPECT_EQ(back.band(b), img.band(b));
}

}  // namespace
}  // namespace lotpoly
