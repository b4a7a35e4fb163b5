#include "lotpoly/geojson.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "test_util.hpp"

namespace lotpoly {
namespace {

namespace fs = std::filesystem;
using testutil::rect_polygon;

class GeoJsonTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / "lotpoly_geojson_test";
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_text(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream f(p);
    f << text;
    return p;
  }

  fs::path dir_;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

TEST_F(GeoJsonTest, EmptyCollection) {
  const fs::path p = dir_ / "empty.geojson";
  write_polygons_geojson({}, p);
  EXPECT_EQ(slurp(p), "{\"type\":\"FeatureCollection\",\"features\":[]}\n");
  EXPECT_TRUE(read_polygons_geojson(p).geometry.empty());
}

TEST_F(GeoJsonTest, SingleSquareFeatureClosedRing) {
  MultiPolygonGeom mp{{rect_polygon(0, 0, 1, 1)}};
  const fs::path p = dir_ / "sq.geojson";
  write_polygons_geojson(mp, p, {"t1"});
  const std::string text = slurp(p);
  EXPECT_NE(text.find("\"type\":\"Polygon\""), std::string::npos);
  EXPECT_NE(text.find("\"source_tile\":\"t1\""), std::string::npos);
  EXPECT_NE(text.find("\"area_m2\":"), std::string::npos);

  const nlohmann::json doc = nlohmann::json::parse(text);
  const auto& ring = doc["features"][0]["geometry"]["coordinates"][0];
  ASSERT_EQ(ring.size(), 5u);  // 4 corners + closing point
  EXPECT_EQ(ring.front(), ring.back());
}

TEST_F(GeoJsonTest, RoundTripPreservesGeometry) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coord(-5000.0, 5000.0);
  MultiPolygonGeom mp;
  for (int i = 0; i < 100; ++i) {
    const double x = coord(rng), y = coord(rng);
    const double w = 10.0 + 200.0 * std::abs(coord(rng)) / 5000.0;
    mp.polygons.push_back(rect_polygon(x, y, x + w, y + w));
  }
  const fs::path p = dir_ / "rt.geojson";
  write_polygons_geojson(mp, p);
  const GeoJsonPolygons back = read_polygons_geojson(p);
  ASSERT_EQ(back.geometry.polygons.size(), mp.polygons.size());

  // Vertex drift below 1e-7 degrees once mapped back to lon/lat.
  double max_drift_deg = 0.0;
  for (std::size_t i = 0; i < mp.polygons.size(); ++i) {
    const auto& orig = mp.polygons[i].exterior.points;
    const auto& got = back.geometry.polygons[i].exterior.points;
    ASSERT_EQ(orig.size(), got.size());
    for (std::size_t j = 0; j < orig.size(); ++j) {
      const LonLat a = mercator_to_lonlat(orig[j]);
      const LonLat b = mercator_to_lonlat(got[j]);
      max_drift_deg = std::max(max_drift_deg, std::fabs(a.lon - b.lon));
      max_drift_deg = std::max(max_drift_deg, std::fabs(a.lat - b.lat));
    }
  }
  EXPECT_LT(max_drift_deg, 1e-7);
}

TEST_F(GeoJsonTest, WriteIsByteDeterministic) {
  MultiPolygonGeom mp{{rect_polygon(3.7, -2.1, 45.9, 100.0)}};
  mp.polygons[0].holes.push_back(
      testutil::make_ring({{10, 10}, {10, 20}, {20, 20}, {20, 10}}));
  ensure_cw(mp.polygons[0].holes[0]);
  const fs::path p1 = dir_ / "a.geojson";
  const fs::path p2 = dir_ / "b.geojson";
  write_polygons_geojson(mp, p1, {"tile_a"});
  write_polygons_geojson(mp, p2, {"tile_a"});
  EXPECT_EQ(slurp(p1), slurp(p2));
}

TEST_F(GeoJsonTest, MalformedJsonReportsByteOffset) {
  const fs::path p = write_text("bad.geojson", "{\"type\": \"FeatureCollection\", !!!");
  try {
    read_polygons_geojson(p);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
  }
}

TEST_F(GeoJsonTest, UnsupportedGeometryNamesFeatureIndex) {
  const fs::path p = write_text(
      "pt.geojson",
      R"({"type":"FeatureCollection","features":[
        {"type":"Feature","properties":{},"geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,0]]]}},
        {"type":"Feature","properties":{},"geometry":{"type":"Point","coordinates":[1,2]}}]})");
  try {
    read_polygons_geojson(p);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("feature 1"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("Point"), std::string::npos);
  }
}

TEST_F(GeoJsonTest, MultiPolygonFlattened) {
  const fs::path p = write_text(
      "mp.geojson",
      R"({"type":"FeatureCollection","features":[
        {"type":"Feature","properties":{"source_tile":"t9"},"geometry":{"type":"MultiPolygon",
         "coordinates":[[[[0,0],[0.001,0],[0.001,0.001],[0,0.001],[0,0]]],
                        [[[0.01,0],[0.011,0],[0.011,0.001],[0.01,0.001],[0.01,0]]]]}}]})");
  const GeoJsonPolygons got = read_polygons_geojson(p);
  EXPECT_EQ(got.geometry.polygons.size(), 2u);
  EXPECT_EQ(got.source_tiles[0], "t9");
  EXPECT_EQ(got.source_tiles[1], "t9");
}

TEST_F(GeoJsonTest, ReaderNormalizesOrientation) {
  // Exterior written clockwise; reader flips it counter-clockwise.
  const fs::path p = write_text(
      "cw.geojson",
      R"({"type":"FeatureCollection","features":[
        {"type":"Feature","properties":{},"geometry":{"type":"Polygon",
         "coordinates":[[[0,0],[0,0.001],[0.001,0.001],[0.001,0],[0,0]]]}}]})");
  const GeoJsonPolygons got = read_polygons_geojson(p);
  ASSERT_EQ(got.geometry.polygons.size(), 1u);
  EXPECT_GT(ring_area_planar(got.geometry.polygons[0].exterior), 0.0);
}

TEST_F(GeoJsonTest, RoadsRoundTrip) {
  std::vector<RoadCenterline> roads;
  roads.push_back({{{0.0, 0.0}, {500.0, 20.0}, {900.0, -10.0}}, 3});
  roads.push_back({{{100.0, 100.0}, {200.0, 100.0}}, std::nullopt});
  const fs::path p = dir_ / "roads.geojson";
  write_roads_geojson(roads, p);
  const std::vector<RoadCenterline> back = read_roads_geojson(p);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].lanes, std::optional<int>(3));
  EXPECT_FALSE(back[1].lanes.has_value());
  ASSERT_EQ(back[0].points.size(), 3u);
  EXPECT_NEAR(back[0].points[1].x, 500.0, 0.02);
  EXPECT_NEAR(back[0].points[1].y, 20.0, 0.02);
}

TEST_F(GeoJsonTest, RoadsRejectNonLineString) {
  const fs::path p = write_text(
      "notline.geojson",
      R"({"type":"FeatureCollection","features":[
        {"type":"Feature","properties":{},"geometry":{"type":"Polygon",
         "coordinates":[[[0,0],[0.001,0],[0.001,0.001],[0,0]]]}}]})");
  EXPECT_THROW(read_roads_geojson(p), ValidationError);
}

TEST_F(GeoJsonTest, RoadsRejectBadLanes) {
  const fs::path p = write_text(
      "badlanes.geojson",
      R"({"type":"FeatureCollection","features":[
        {"type":"Feature","properties":{"lanes":"two"},"geometry":{"type":"LineString",
         "coordinates":[[0,0],[0.001,0]]}}]})");
  EXPECT_THROW(read_roads_geojson(p), ValidationError);
}

TEST_F(GeoJsonTest, MissingFileIsIoError) {
  EXPECT_THROW(read_polygons_geojson(dir_ / "absent.geojson"), IoError);
}

}  // namespace
}  // namespace lotpoly
