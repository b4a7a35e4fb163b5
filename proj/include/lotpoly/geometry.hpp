#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "lotpoly/error.hpp"
#include "lotpoly/geo.hpp"

namespace lotpoly {

// Closed ring stored without the repeated closing point. Exterior rings wind
// counter-clockwise, holes clockwise. Vertices may repeat (pixel-corner
// pinches), but edges never properly cross.
struct Ring {
  std::vector<MercatorXY> points;
};

struct PolygonGeom {
  Ring exterior;
  std::vector<Ring> holes;
};

struct MultiPolygonGeom {
  std::vector<PolygonGeom> polygons;

  bool empty() const { return polygons.empty(); }
  std::size_t ring_count() const {
    std::size_t n = 0;
    for (const PolygonGeom& p : polygons) n += 1 + p.holes.size();
    return n;
  }
  std::size_t vertex_count() const {
    std::size_t n = 0;
    for (const PolygonGeom& p : polygons) {
      n += p.exterior.points.size();
      for (const Ring& h : p.holes) n += h.points.size();
    }
    return n;
  }
};

struct BBox {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  void expand(const MercatorXY& p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  void expand(const BBox& o) {
    min_x = std::min(min_x, o.min_x);
    min_y = std::min(min_y, o.min_y);
    max_x = std::max(max_x, o.max_x);
    max_y = std::max(max_y, o.max_y);
  }
  bool intersects(const BBox& o) const {
    return min_x <= o.max_x && o.min_x <= max_x && min_y <= o.max_y && o.min_y <= max_y;
  }
  bool valid() const { return min_x <= max_x && min_y <= max_y; }
  double diagonal() const {
    return valid() ? std::hypot(max_x - min_x, max_y - min_y) : 0.0;
  }
};

inline BBox bounds_of(const Ring& r) {
  BBox b;
  for (const MercatorXY& p : r.points) b.expand(p);
  return b;
}

inline BBox bounds_of(const PolygonGeom& p) { return bounds_of(p.exterior); }

inline BBox bounds_of(const MultiPolygonGeom& mp) {
  BBox b;
  for (const PolygonGeom& p : mp.polygons) b.expand(bounds_of(p));
  return b;
}

// Signed shoelace area in planar Mercator square meters; positive for CCW.
inline double ring_area_planar(const Ring& r) {
  const std::size_t n = r.points.size();
  if (n < 3) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const MercatorXY& a = r.points[i];
    const MercatorXY& b = r.points[(i + 1) % n];
    sum += a.x * b.y - b.x * a.y;
  }
  return sum / 2.0;
}

// Ground area after latitude correction: (|exterior| - sum |holes|) * factor.
inline double polygon_area_m2(const PolygonGeom& p, double correction) {
  double a = std::fabs(ring_area_planar(p.exterior));
  for (const Ring& h : p.holes) a -= std::fabs(ring_area_planar(h));
  return std::max(a, 0.0) * correction;
}

inline double multipolygon_area_m2(const MultiPolygonGeom& mp, double correction) {
  double a = 0.0;
  for (const PolygonGeom& p : mp.polygons) a += polygon_area_m2(p, correction);
  return a;
}

// Area-weighted centroid of the exterior ring.
inline MercatorXY ring_centroid(const Ring& r) {
  const std::size_t n = r.points.size();
  if (n == 0) return {0.0, 0.0};
  double cx = 0.0, cy = 0.0, area2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const MercatorXY& a = r.points[i];
    const MercatorXY& b = r.points[(i + 1) % n];
    const double cross = a.x * b.y - b.x * a.y;
    cx += (a.x + b.x) * cross;
    cy += (a.y + b.y) * cross;
    area2 += cross;
  }
  if (std::fabs(area2) < 1e-30) {
    // Degenerate: fall back to the vertex mean.
    cx = cy = 0.0;
    for (const MercatorXY& p : r.points) {
      cx += p.x;
      cy += p.y;
    }
    return {cx / n, cy / n};
  }
  return {cx / (3.0 * area2), cy / (3.0 * area2)};
}

// Latitude-dependent correction factor evaluated at the polygon's centroid.
inline double correction_at(const PolygonGeom& p) {
  const MercatorXY c = ring_centroid(p.exterior);
  return area_correction(mercator_to_lonlat(c).lat);
}

// Even-odd point containment against a single ring.
inline bool point_in_ring(const Ring& r, const MercatorXY& pt) {
  const std::size_t n = r.points.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const MercatorXY& a = r.points[j];
    const MercatorXY& b = r.points[i];
    if ((b.y > pt.y) != (a.y > pt.y)) {
      const double x_cross = b.x + (pt.y - b.y) * (a.x - b.x) / (a.y - b.y);
      if (pt.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

inline bool point_in_polygon(const PolygonGeom& p, const MercatorXY& pt) {
  if (!point_in_ring(p.exterior, pt)) return false;
  for (const Ring& h : p.holes) {
    if (point_in_ring(h, pt)) return false;
  }
  return true;
}

inline bool point_in_multipolygon(const MultiPolygonGeom& mp, const MercatorXY& pt) {
  for (const PolygonGeom& p : mp.polygons) {
    if (point_in_polygon(p, pt)) return true;
  }
  return false;
}

namespace detail {

inline double cross(const MercatorXY& o, const MercatorXY& a, const MercatorXY& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline bool on_segment(const MercatorXY& a, const MercatorXY& b, const MercatorXY& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

inline bool points_equal(const MercatorXY& a, const MercatorXY& b) {
  return a.x == b.x && a.y == b.y;
}

// True when segments (a,b) and (c,d) intersect anywhere other than at shared
// endpoints. Collinear overlap of positive length counts as an intersection.
inline bool segments_conflict(const MercatorXY& a, const MercatorXY& b,
                              const MercatorXY& c, const MercatorXY& d) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);

  const bool share_ac = points_equal(a, c), share_ad = points_equal(a, d);
  const bool share_bc = points_equal(b, c), share_bd = points_equal(b, d);

  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;  // proper crossing
  }
  // Endpoint of one segment strictly interior to the other.
  if (d1 == 0 && on_segment(c, d, a) && !share_ac && !share_ad) return true;
  if (d2 == 0 && on_segment(c, d, b) && !share_bc && !share_bd) return true;
  if (d3 == 0 && on_segment(a, b, c) && !share_ac && !share_bc) return true;
  if (d4 == 0 && on_segment(a, b, d) && !share_ad && !share_bd) return true;
  // Collinear segments conflict when their ranges overlap with positive
  // length; touching end to end is fine.
  if (d1 == 0 && d2 == 0 && d3 == 0 && d4 == 0) {
    const bool use_x = std::fabs(b.x - a.x) + std::fabs(d.x - c.x) >
                       std::fabs(b.y - a.y) + std::fabs(d.y - c.y);
    const double a0 = use_x ? a.x : a.y, a1 = use_x ? b.x : b.y;
    const double b0 = use_x ? c.x : c.y, b1 = use_x ? d.x : d.y;
    const double lo = std::max(std::min(a0, a1), std::min(b0, b1));
    const double hi = std::min(std::max(a0, a1), std::max(b0, b1));
    if (lo < hi) return true;
  }
  return false;
}

}  // namespace detail

// Checks the structural ring invariants: >= 3 points, implicit closure (first
// != last), no repeated consecutive points, and no edge crossings. Touching
// at a shared vertex is allowed; it arises at pixel-corner pinches.
inline bool ring_is_valid(const Ring& r, std::string* why = nullptr) {
  const std::size_t n = r.points.size();
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (n < 3) return fail("ring has fewer than 3 points");
  for (std::size_t i = 0; i < n; ++i) {
    const MercatorXY& a = r.points[i];
    const MercatorXY& b = r.points[(i + 1) % n];
    if (!std::isfinite(a.x) || !std::isfinite(a.y)) return fail("non-finite coordinate");
    if (detail::points_equal(a, b)) {
      return fail("repeated consecutive point at index " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const MercatorXY& a = r.points[i];
    const MercatorXY& b = r.points[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const MercatorXY& c = r.points[j];
      const MercatorXY& d = r.points[(j + 1) % n];
      if (detail::segments_conflict(a, b, c, d)) {
        return fail("edges " + std::to_string(i) + " and " + std::to_string(j) +
                    " intersect");
      }
    }
  }
  return true;
}

inline bool polygon_is_valid(const PolygonGeom& p, std::string* why = nullptr) {
  if (!ring_is_valid(p.exterior, why)) return false;
  if (ring_area_planar(p.exterior) <= 0.0) {
    if (why) *why = "exterior ring is not counter-clockwise";
    return false;
  }
  for (const Ring& h : p.holes) {
    if (!ring_is_valid(h, why)) return false;
    if (ring_area_planar(h) >= 0.0) {
      if (why) *why = "hole ring is not clockwise";
      return false;
    }
  }
  return true;
}

inline Ring reversed(Ring r) {
  std::reverse(r.points.begin(), r.points.end());
  return r;
}

inline void ensure_ccw(Ring& r) {
  if (ring_area_planar(r) < 0.0) std::reverse(r.points.begin(), r.points.end());
}

inline void ensure_cw(Ring& r) {
  if (ring_area_planar(r) > 0.0) std::reverse(r.points.begin(), r.points.end());
}

// Rotates the ring so the lexicographically smallest vertex comes first;
// keeps output byte-stable across runs.
inline void canonicalize_start(Ring& r) {
  if (r.points.empty()) return;
  const auto less = [](const MercatorXY& a, const MercatorXY& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  };
  const auto it = std::min_element(r.points.begin(), r.points.end(), less);
  std::rotate(r.points.begin(), it, r.points.end());
}

}  // namespace lotpoly
