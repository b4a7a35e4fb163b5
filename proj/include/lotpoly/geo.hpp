#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "lotpoly/error.hpp"

namespace lotpoly {

// Spherical (web) Mercator, EPSG:3857. R is the WGS84 semi-major axis,
// which slippy-map tile sources use as the sphere radius.
inline constexpr double kEarthRadiusM = 6378137.0;
inline constexpr double kDegToRad = std::numbers::pi / 180.0;
inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// atan(sinh(pi)) in degrees: latitude where the square Mercator world ends.
inline constexpr double kMercatorMaxLatDeg = 85.05112877980659;
inline constexpr double kMercatorMaxMeters = std::numbers::pi * kEarthRadiusM;

struct LonLat {
  double lon = 0.0;  // degrees, [-180, 180]
  double lat = 0.0;  // degrees, [-85.0511..., 85.0511...]
};

struct MercatorXY {
  double x = 0.0;  // meters
  double y = 0.0;  // meters
};

// Affine pixel <-> world mapping for one tile. Pixel (0,0) is the top-left
// corner of the top-left pixel; rows advance southward (world y decreases).
struct GeoTransform {
  double origin_x = 0.0;  // world x of the top-left corner
  double origin_y = 0.0;  // world y of the top-left corner
  double pixel_w = 1.0;   // meters per pixel, > 0
  double pixel_h = 1.0;   // meters per pixel, > 0
};

struct TileBounds {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;
};

struct PixelCoord {
  double col = 0.0;
  double row = 0.0;
};

namespace detail {

// sin for degree arguments in [0, 45]. Exact where the true value is
// representable (0 and 30 degrees); libm otherwise.
inline double sin_deg_octant(double deg) {
  if (deg == 0.0) return 0.0;
  if (deg == 30.0) return 0.5;
  return std::sin(deg * kDegToRad);
}

inline double cos_deg_octant(double deg) {
  if (deg == 0.0) return 1.0;
  return std::cos(deg * kDegToRad);
}

}  // namespace detail

// Cosine of an angle in degrees. Range reduction happens in degrees, where
// it is exact, so quadrant boundaries and 30-degree multiples with
// representable cosines come out exact (cos_deg(60) == 0.5, cos_deg(90) == 0).
inline double cos_deg(double deg) {
  double r = std::fmod(std::fabs(deg), 360.0);
  if (r > 180.0) r = 360.0 - r;           // exact: Sterbenz
  double sign = 1.0;
  if (r > 90.0) {
    r = 180.0 - r;                        // exact
    sign = -1.0;
  }
  if (r > 45.0) return sign * detail::sin_deg_octant(90.0 - r);
  return sign * detail::cos_deg_octant(r);
}

inline void validate_lonlat(const LonLat& p) {
  if (!(std::fabs(p.lon) <= 180.0) || !(std::fabs(p.lat) <= kMercatorMaxLatDeg)) {
    throw ValidationError("lon/lat out of Web Mercator range: lon=" +
                          std::to_string(p.lon) + " lat=" + std::to_string(p.lat));
  }
}

// y uses the asinh form of R * ln(tan(pi/4 + lat/2)); same function, exact
// at the equator and an exact analytic inverse of mercator_to_lonlat.
inline MercatorXY lonlat_to_mercator(const LonLat& p) {
  validate_lonlat(p);
  const double lat_rad = p.lat * kDegToRad;
  return {kEarthRadiusM * p.lon * kDegToRad,
          kEarthRadiusM * std::asinh(std::tan(lat_rad))};
}

inline LonLat mercator_to_lonlat(const MercatorXY& p) {
  const double lon = (p.x / kEarthRadiusM) * kRadToDeg;
  const double lat = std::atan(std::sinh(p.y / kEarthRadiusM)) * kRadToDeg;
  return {lon, lat};
}

inline MercatorXY pixel_to_world(const GeoTransform& t, double col, double row) {
  return {t.origin_x + col * t.pixel_w, t.origin_y - row * t.pixel_h};
}

inline PixelCoord world_to_pixel(const GeoTransform& t, const MercatorXY& w) {
  if (t.pixel_w == 0.0 || t.pixel_h == 0.0) {
    throw ValidationError("invalid GeoTransform: zero pixel size");
  }
  return {(w.x - t.origin_x) / t.pixel_w, (t.origin_y - w.y) / t.pixel_h};
}

// Ratio of true ground area to planar Mercator area at a given latitude.
// Mercator inflates lengths by sec(lat), so areas shrink back by cos^2.
inline double area_correction(double lat_deg) {
  const double c = cos_deg(lat_deg);
  return c * c;
}

inline GeoTransform geotransform_for_tile(const TileBounds& b, int width, int height) {
  if (width <= 0 || height <= 0) {
    throw ValidationError("tile raster dimensions must be positive");
  }
  if (!(b.min_x < b.max_x) || !(b.min_y < b.max_y)) {
    throw ValidationError("degenerate tile bounds");
  }
  return {b.min_x, b.max_y, (b.max_x - b.min_x) / width, (b.max_y - b.min_y) / height};
}

inline TileBounds tile_bounds_of(const GeoTransform& t, int width, int height) {
  const MercatorXY br = pixel_to_world(t, width, height);
  return {t.origin_x, br.y, br.x, t.origin_y};
}

}  // namespace lotpoly
