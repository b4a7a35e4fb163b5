#include "lotpoly/geo.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace lotpoly {
namespace {

// Independent route for the Mercator ordinate: y = R * ln(tan(pi/4 + lat/2)).
double mercator_y_oracle(double lat_deg) {
  const double lat_rad = lat_deg * kDegToRad;
  return kEarthRadiusM * std::log(std::tan(std::numbers::pi / 4.0 + lat_rad / 2.0));
}

TEST(Projection, OriginMapsToOrigin) {
  const MercatorXY m = lonlat_to_mercator({0.0, 0.0});
  EXPECT_DOUBLE_EQ(m.x, 0.0);
  EXPECT_DOUBLE_EQ(m.y, 0.0);
}

TEST(Projection, Antimeridian) {
  const MercatorXY m = lonlat_to_mercator({180.0, 0.0});
  EXPECT_NEAR(m.x, 20037508.342789244, 1e-6);
  EXPECT_NEAR(m.y, 0.0, 1e-9);
}

TEST(Projection, NearPoleOrdinate) {
  const MercatorXY m = lonlat_to_mercator({0.0, 85.0511287798});
  EXPECT_NEAR(m.y, mercator_y_oracle(85.0511287798), 1e-6);
  EXPECT_NEAR(m.y, 20037508.34, 0.01);
}

TEST(Projection, InverseOfAntimeridian) {
  const LonLat p = mercator_to_lonlat({20037508.3428, 0.0});
  EXPECT_NEAR(p.lon, 180.0, 1e-8);
  EXPECT_NEAR(p.lat, 0.0, 1e-9);
}

TEST(Projection, OutOfRangeLatitudeThrows) {
  EXPECT_THROW(lonlat_to_mercator({0.0, 86.0}), ValidationError);
  EXPECT_THROW(lonlat_to_mercator({181.0, 0.0}), ValidationError);
}

TEST(Projection, RoundTripRandomPoints) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> lon_d(-180.0, 180.0);
  std::uniform_real_distribution<double> lat_d(-85.0511, 85.0511);
  for (int i = 0; i < 1000; ++i) {
    const LonLat p{lon_d(rng), lat_d(rng)};
    const LonLat q = mercator_to_lonlat(lonlat_to_mercator(p));
    EXPECT_NEAR(q.lon, p.lon, 1e-9);
    EXPECT_NEAR(q.lat, p.lat, 1e-9);
  }
}

TEST(PixelWorld, OriginCorner) {
  const GeoTransform t{0.0, 0.0, 0.3, 0.3};
  const MercatorXY w = pixel_to_world(t, 0.0, 0.0);
  EXPECT_DOUBLE_EQ(w.x, 0.0);
  EXPECT_DOUBLE_EQ(w.y, 0.0);
}

TEST(PixelWorld, FullTileSpan) {
  const GeoTransform t{0.0, 0.0, 0.3, 0.3};
  const MercatorXY w = pixel_to_world(t, 512.0, 512.0);
  EXPECT_NEAR(w.x, 153.6, 1e-12);
  EXPECT_NEAR(w.y, -153.6, 1e-12);
}

TEST(PixelWorld, WorldToPixelCenter) {
  const GeoTransform t{0.0, 0.0, 0.3, 0.3};
  const PixelCoord p = world_to_pixel(t, {0.15, -0.15});
  EXPECT_NEAR(p.col, 0.5, 1e-12);
  EXPECT_NEAR(p.row, 0.5, 1e-12);
}

TEST(PixelWorld, UnitTransform) {
  const GeoTransform t{100.0, 200.0, 1.0, 1.0};
  const PixelCoord p = world_to_pixel(t, {101.0, 199.0});
  EXPECT_DOUBLE_EQ(p.col, 1.0);
  EXPECT_DOUBLE_EQ(p.row, 1.0);
}

TEST(PixelWorld, ZeroPixelSizeThrows) {
  const GeoTransform t{0.0, 0.0, 0.0, 0.3};
  EXPECT_THROW(world_to_pixel(t, {1.0, 1.0}), ValidationError);
}

TEST(PixelWorld, AffineRoundTrip) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-1000.0, 1000.0);
  const GeoTransform t{12345.6, -789.0, 0.3, 0.25};
  for (int i = 0; i < 200; ++i) {
    const double col = d(rng), row = d(rng);
    const PixelCoord p = world_to_pixel(t, pixel_to_world(t, col, row));
    EXPECT_NEAR(p.col, col, 1e-9);
    EXPECT_NEAR(p.row, row, 1e-9);
  }
}

TEST(AreaCorrection, Equator) { EXPECT_DOUBLE_EQ(area_correction(0.0), 1.0); }

TEST(AreaCorrection, SixtyDegreesExact) {
  EXPECT_EQ(area_correction(60.0), 0.25);
  EXPECT_EQ(area_correction(-60.0), 0.25);
}

TEST(AreaCorrection, FortyFive) { EXPECT_NEAR(area_correction(45.0), 0.5, 1e-15); }

TEST(AreaCorrection, MonotoneDecreasing) {
  double prev = area_correction(0.0);
  for (int i = 1; i <= 850; ++i) {
    const double cur = area_correction(i * 0.1);
    EXPECT_LE(cur, prev) << "at lat " << i * 0.1;
    prev = cur;
  }
}

TEST(TileTransform, PaperTileConvention) {
  const GeoTransform t = geotransform_for_tile({0.0, 0.0, 153.6, 153.6}, 512, 512);
  EXPECT_DOUBLE_EQ(t.origin_x, 0.0);
  EXPECT_DOUBLE_EQ(t.origin_y, 153.6);
  EXPECT_NEAR(t.pixel_w, 0.3, 1e-12);
  EXPECT_NEAR(t.pixel_h, 0.3, 1e-12);
}

TEST(TileTransform, UnitTile) {
  const GeoTransform t = geotransform_for_tile({0.0, 0.0, 1.0, 1.0}, 1, 1);
  EXPECT_DOUBLE_EQ(t.origin_x, 0.0);
  EXPECT_DOUBLE_EQ(t.origin_y, 1.0);
  EXPECT_DOUBLE_EQ(t.pixel_w, 1.0);
  EXPECT_DOUBLE_EQ(t.pixel_h, 1.0);
}

TEST(TileTransform, CornerClosure) {
  const TileBounds b{-10.0, 20.0, 300.5, 170.25};
  const GeoTransform t = geotransform_for_tile(b, 512, 256);
  const MercatorXY tl = pixel_to_world(t, 0, 0);
  const MercatorXY br = pixel_to_world(t, 512, 256);
  EXPECT_DOUBLE_EQ(tl.x, b.min_x);
  EXPECT_DOUBLE_EQ(tl.y, b.max_y);
  EXPECT_DOUBLE_EQ(br.x, b.max_x);
  EXPECT_DOUBLE_EQ(br.y, b.min_y);
  const TileBounds back = tile_bounds_of(t, 512, 256);
  EXPECT_DOUBLE_EQ(back.min_x, b.min_x);
  EXPECT_DOUBLE_EQ(back.max_y, b.max_y);
}

TEST(TileTransform, DegenerateBoundsThrow) {
  EXPECT_THROW(geotransform_for_tile({0, 0, 0, 1}, 8, 8), ValidationError);
  EXPECT_THROW(geotransform_for_tile({0, 0, 1, 1}, 0, 8), ValidationError);
}

}  // namespace
}  // namespace lotpoly
