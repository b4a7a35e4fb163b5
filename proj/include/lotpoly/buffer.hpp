#pragma once

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/linestring.hpp>

#include <string>
#include <vector>

#include "lotpoly/clip.hpp"
#include "lotpoly/geometry.hpp"

namespace lotpoly {

// Segments per quarter circle when approximating round joins.
inline constexpr int kArcSegmentsPerQuarter = 8;

// Flat-capped, round-joined buffer of radius width_m / 2 around a polyline.
inline PolygonGeom buffer_centerline(const std::vector<MercatorXY>& line, double width_m) {
  if (line.size() < 2) {
    throw ValidationError("buffer_centerline needs at least 2 points");
  }
  if (!(width_m > 0.0)) {
    throw ValidationError("buffer width must be positive");
  }
  namespace bg = boost::geometry;
  bg::model::linestring<bgdetail::BoostPoint> ls;
  ls.reserve(line.size());
  for (const MercatorXY& p : line) {
    if (!ls.empty() && bg::get<0>(ls.back()) == p.x && bg::get<1>(ls.back()) == p.y) {
      continue;
    }
    ls.emplace_back(p.x, p.y);
  }
  if (ls.size() < 2) {
    throw ValidationError("buffer_centerline polyline is degenerate");
  }

  const bg::strategy::buffer::distance_symmetric<double> distance(width_m / 2.0);
  const bg::strategy::buffer::side_straight side;
  const bg::strategy::buffer::join_round join(4 * kArcSegmentsPerQuarter);
  const bg::strategy::buffer::end_flat end;
  const bg::strategy::buffer::point_circle circle(4 * kArcSegmentsPerQuarter);

  bgdetail::BoostMultiPolygon out;
  bg::buffer(ls, out, distance, side, join, end, circle);
  const MultiPolygonGeom mp = bgdetail::from_boost(out);
  if (mp.polygons.size() != 1) {
    throw GeometryError("centerline buffer produced " +
                        std::to_string(mp.polygons.size()) + " polygons");
  }
  return mp.polygons[0];
}

}  // namespace lotpoly
