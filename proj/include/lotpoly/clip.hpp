#pragma once

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/geometries.hpp>
#include <boost/geometry/geometries/point_xy.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "lotpoly/geometry.hpp"

namespace lotpoly {

// Grid pitch for snap rounding before boolean operations. Rectilinear pixel
// geometry produces many near-degenerate touches; snapping removes them.
inline constexpr double kSnapGridM = 1e-6;

namespace bgdetail {

namespace bg = boost::geometry;
using BoostPoint = bg::model::d2::point_xy<double>;
using BoostPolygon = bg::model::polygon<BoostPoint, false, true>;  // ccw, closed
using BoostMultiPolygon = bg::model::multi_polygon<BoostPolygon>;

inline double snap(double v, double grid) { return std::round(v / grid) * grid; }

inline BoostPolygon to_boost(const PolygonGeom& p, double grid) {
  BoostPolygon out;
  auto push_ring = [&](const Ring& r, auto& boost_ring) {
    boost_ring.reserve(r.points.size() + 1);
    for (const MercatorXY& pt : r.points) {
      boost_ring.emplace_back(snap(pt.x, grid), snap(pt.y, grid));
    }
    if (!boost_ring.empty()) boost_ring.push_back(boost_ring.front());
  };
  push_ring(p.exterior, out.outer());
  out.inners().resize(p.holes.size());
  for (std::size_t i = 0; i < p.holes.size(); ++i) push_ring(p.holes[i], out.inners()[i]);
  bg::correct(out);
  return out;
}

inline BoostMultiPolygon to_boost(const MultiPolygonGeom& mp, double grid) {
  BoostMultiPolygon out;
  out.reserve(mp.polygons.size());
  for (const PolygonGeom& p : mp.polygons) out.push_back(to_boost(p, grid));
  return out;
}

inline Ring ring_from_boost(const BoostPolygon::ring_type& boost_ring) {
  Ring r;
  if (boost_ring.size() < 2) return r;
  r.points.reserve(boost_ring.size() - 1);
  for (std::size_t i = 0; i + 1 < boost_ring.size(); ++i) {  // drop closing point
    r.points.push_back({bg::get<0>(boost_ring[i]), bg::get<1>(boost_ring[i])});
  }
  // Drop any residual consecutive duplicates.
  std::vector<MercatorXY> cleaned;
  cleaned.reserve(r.points.size());
  for (const MercatorXY& p : r.points) {
    if (cleaned.empty() || cleaned.back().x != p.x || cleaned.back().y != p.y) {
      cleaned.push_back(p);
    }
  }
  while (cleaned.size() > 1 && cleaned.front().x == cleaned.back().x &&
         cleaned.front().y == cleaned.back().y) {
    cleaned.pop_back();
  }
  r.points = std::move(cleaned);
  return r;
}

inline MultiPolygonGeom from_boost(const BoostMultiPolygon& bmp) {
  MultiPolygonGeom out;
  for (const BoostPolygon& bp : bmp) {
    PolygonGeom p;
    p.exterior = ring_from_boost(bp.outer());
    if (p.exterior.points.size() < 3 ||
        std::fabs(ring_area_planar(p.exterior)) <= 0.0) {
      continue;  // degenerate sliver
    }
    ensure_ccw(p.exterior);
    for (const auto& inner : bp.inners()) {
      Ring h = ring_from_boost(inner);
      if (h.points.size() < 3 || std::fabs(ring_area_planar(h)) <= 0.0) continue;
      ensure_cw(h);
      p.holes.push_back(std::move(h));
    }
    canonicalize_start(p.exterior);
    for (Ring& h : p.holes) canonicalize_start(h);
    out.polygons.push_back(std::move(p));
  }
  return out;
}

}  // namespace bgdetail

// Point-set difference mp \ sub, snap-rounded before clipping.
inline MultiPolygonGeom difference(const MultiPolygonGeom& mp, const MultiPolygonGeom& sub,
                                   double snap_grid = kSnapGridM) {
  if (mp.empty()) return {};
  if (sub.empty()) {
    // Still normalize through the snap grid so behavior does not depend on
    // whether the subtrahend is present.
    return bgdetail::from_boost(bgdetail::to_boost(mp, snap_grid));
  }
  try {
    bgdetail::BoostMultiPolygon a = bgdetail::to_boost(mp, snap_grid);
    bgdetail::BoostMultiPolygon b = bgdetail::to_boost(sub, snap_grid);
    bgdetail::BoostMultiPolygon out;
    boost::geometry::difference(a, b, out);
    return bgdetail::from_boost(out);
  } catch (const std::exception&) {
    // Retry polygon by polygon to name the offender. Minuend polygons have
    // disjoint interiors, so concatenating per-polygon results is equivalent.
    MultiPolygonGeom result;
    bgdetail::BoostMultiPolygon b = bgdetail::to_boost(sub, snap_grid);
    for (std::size_t i = 0; i < mp.polygons.size(); ++i) {
      try {
        bgdetail::BoostMultiPolygon a;
        a.push_back(bgdetail::to_boost(mp.polygons[i], snap_grid));
        bgdetail::BoostMultiPolygon out;
        boost::geometry::difference(a, b, out);
        MultiPolygonGeom part = bgdetail::from_boost(out);
        for (PolygonGeom& p : part.polygons) result.polygons.push_back(std::move(p));
      } catch (const std::exception& e) {
        throw GeometryError("difference failed after snap rounding at polygon " +
                            std::to_string(i) + ": " + e.what());
      }
    }
    return result;
  }
}

inline MultiPolygonGeom intersection(const MultiPolygonGeom& a, const MultiPolygonGeom& b,
                                     double snap_grid = kSnapGridM) {
  if (a.empty() || b.empty()) return {};
  try {
    bgdetail::BoostMultiPolygon ba = bgdetail::to_boost(a, snap_grid);
    bgdetail::BoostMultiPolygon bb = bgdetail::to_boost(b, snap_grid);
    bgdetail::BoostMultiPolygon out;
    boost::geometry::intersection(ba, bb, out);
    return bgdetail::from_boost(out);
  } catch (const std::exception& e) {
    throw GeometryError(std::string("intersection failed after snap rounding: ") + e.what());
  }
}

// Union of all polygons; touching or overlapping members merge.
inline MultiPolygonGeom union_all(const MultiPolygonGeom& mp, double snap_grid = kSnapGridM) {
  if (mp.empty()) return {};
  try {
    bgdetail::BoostMultiPolygon acc;
    for (const PolygonGeom& p : mp.polygons) {
      bgdetail::BoostMultiPolygon one;
      one.push_back(bgdetail::to_boost(p, snap_grid));
      bgdetail::BoostMultiPolygon merged;
      boost::geometry::union_(acc, one, merged);
      acc = std::move(merged);
    }
    return bgdetail::from_boost(acc);
  } catch (const std::exception& e) {
    throw GeometryError(std::string("union failed after snap rounding: ") + e.what());
  }
}

}  // namespace lotpoly
