#include "lotpoly/synth.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "lotpoly/metrics.hpp"
#include "lotpoly/vectorize.hpp"

namespace lotpoly {
namespace {

namespace fs = std::filesystem;

std::string file_bytes(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

class SynthTest : public ::testing::Test {
protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() / "lotpoly_synth_test";
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }
  fs::path root_;
};

TEST_F(SynthTest, SameSeedBitIdentical) {
  SynthOptions opt;
  opt.seed = 11;
  opt.n_tiles = 6;
  opt.tile_px = 256;
  generate_fixtures(opt, root_ / "a");
  generate_fixtures(opt, root_ / "b");

  std::vector<fs::path> rels;
  for (const auto& e : fs::recursive_directory_iterator(root_ / "a")) {
    if (e.is_regular_file()) rels.push_back(fs::relative(e.path(), root_ / "a"));
  }
  ASSERT_EQ(rels.size(), 14u);  // 6 gt + 6 pred + 2 geojson
  for (const fs::path& rel : rels) {
    EXPECT_EQ(file_bytes(root_ / "a" / rel), file_bytes(root_ / "b" / rel))
        << rel.string();
  }
}

TEST_F(SynthTest, DifferentSeedsDiffer) {
  SynthOptions a, b;
  a.seed = 1;
  b.seed = 2;
  a.n_tiles = b.n_tiles = 2;
  a.tile_px = b.tile_px = 256;
  generate_fixtures(a, root_ / "a");
  generate_fixtures(b, root_ / "b");
  const auto tiles_a = build_manifest(root_ / "a" / "gt");
  const auto tiles_b = build_manifest(root_ / "b" / "gt");
  ASSERT_EQ(tiles_a.size(), tiles_b.size());
  bool any_diff = false;
  for (std::size_t i = 0; i < tiles_a.size(); ++i) {
    any_diff = any_diff || file_bytes(tiles_a[i].image_path) !=
                               file_bytes(tiles_b[i].image_path);
  }
  EXPECT_TRUE(any_diff);
}

TEST_F(SynthTest, CoverageNearPaperAverage) {
  SynthOptions opt;
  opt.seed = 7;
  opt.n_tiles = 100;
  const SynthSummary s = generate_fixtures(opt, root_ / "cov");
  EXPECT_GE(s.mean_gt_coverage, 0.18);
  EXPECT_LE(s.mean_gt_coverage, 0.24);
}

TEST_F(SynthTest, DegradedPredScoresBelowGt) {
  SynthOptions opt;
  opt.seed = 21;
  opt.n_tiles = 4;
  generate_fixtures(opt, root_ / "d");
  const auto gt_tiles = build_manifest(root_ / "d" / "gt");
  const auto pred_tiles = build_manifest(root_ / "d" / "pred");
  ASSERT_EQ(gt_tiles.size(), pred_tiles.size());
  ConfusionCounts total;
  for (std::size_t i = 0; i < gt_tiles.size(); ++i) {
    const BinaryMask gt = read_mask_png(gt_tiles[i].image_path);
    const BinaryMask pred = read_mask_png(pred_tiles[i].image_path);
    total += confusion(pred, gt);
  }
  EXPECT_LT(miou(total), 1.0);
  EXPECT_GT(total.fp, 0u);  // spills exist
  EXPECT_GT(total.fn, 0u);  // holes exist
}

TEST_F(SynthTest, GeoJsonSidecarsReadBack) {
  SynthOptions opt;
  opt.seed = 5;
  opt.n_tiles = 6;
  const SynthSummary s = generate_fixtures(opt, root_ / "g");
  const GeoJsonPolygons buildings =
      read_polygons_geojson(root_ / "g" / "buildings.geojson");
  const std::vector<RoadCenterline> roads =
      read_roads_geojson(root_ / "g" / "roads.geojson");
  EXPECT_EQ(buildings.geometry.polygons.size(), s.building_count);
  EXPECT_EQ(roads.size(), s.road_count);
  for (const RoadCenterline& r : roads) {
    ASSERT_TRUE(r.lanes.has_value());
    EXPECT_GE(*r.lanes, 1);
    EXPECT_LE(*r.lanes, 4);
  }
}

TEST_F(SynthTest, HolesStayUnderThreshold) {
  // Every hole punched into pred must fall below 60 m2, so hole removal can
  // never delete a legitimate gap.
  SynthOptions opt;
  opt.seed = 31;
  opt.n_tiles = 4;
  generate_fixtures(opt, root_ / "h");
  const auto gt_tiles = build_manifest(root_ / "h" / "gt");
  const auto pred_tiles = build_manifest(root_ / "h" / "pred");
  for (std::size_t i = 0; i < gt_tiles.size(); ++i) {
    const BinaryMask gt = read_mask_png(gt_tiles[i].image_path);
    const BinaryMask pred = read_mask_png(pred_tiles[i].image_path);
    // Hole pixels: gt 1, pred 0. Their connected area is the hole size.
    std::vector<std::uint8_t> holes(gt.values().size(), 0);
    for (std::size_t k = 0; k < holes.size(); ++k) {
      holes[k] = gt.values()[k] == 1 && pred.values()[k] == 0;
    }
    const BinaryMask hole_mask(gt.width(), gt.height(), std::move(holes));
    const GeoTransform t =
        geotransform_for_tile(gt_tiles[i].bounds, gt.width(), gt.height());
    for (const PolygonGeom& p : vectorize_mask(hole_mask, t).polygons) {
      EXPECT_LT(polygon_area_m2(p, 1.0), 60.0);
    }
  }
}

}  // namespace
}  // namespace lotpoly
