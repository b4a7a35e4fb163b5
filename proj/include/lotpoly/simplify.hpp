#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "lotpoly/geometry.hpp"

namespace lotpoly {

namespace detail {

inline double point_segment_dist(const MercatorXY& p, const MercatorXY& a,
                                 const MercatorXY& b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return std::hypot(p.x - a.x, p.y - a.y);
  double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

// Farthest vertex pair (set diameter). The diameter is realized on the
// convex hull, which stays small for pixel-boundary rings, so an exact pair
// scan over hull vertices is cheap.
inline std::pair<std::size_t, std::size_t> farthest_pair(
    const std::vector<MercatorXY>& pts) {
  const std::size_t n = pts.size();
  if (n < 2) return {0, 0};

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pts[a].x < pts[b].x || (pts[a].x == pts[b].x && pts[a].y < pts[b].y);
  });
  order.erase(std::unique(order.begin(), order.end(),
                          [&](std::size_t a, std::size_t b) {
                            return pts[a].x == pts[b].x && pts[a].y == pts[b].y;
                          }),
              order.end());

  if (order.size() == 1) return {order[0], order[0]};

  const auto cross3 = [&](std::size_t o, std::size_t a, std::size_t b) {
    return (pts[a].x - pts[o].x) * (pts[b].y - pts[o].y) -
           (pts[a].y - pts[o].y) * (pts[b].x - pts[o].x);
  };
  // Andrew's monotone chain, lower then upper.
  std::vector<std::size_t> hull;
  for (std::size_t idx : order) {
    while (hull.size() >= 2 &&
           cross3(hull[hull.size() - 2], hull[hull.size() - 1], idx) <= 0.0) {
      hull.pop_back();
    }
    hull.push_back(idx);
  }
  const std::size_t lower_size = hull.size();
  for (auto it = order.rbegin() + 1; it != order.rend(); ++it) {
    while (hull.size() > lower_size &&
           cross3(hull[hull.size() - 2], hull[hull.size() - 1], *it) <= 0.0) {
      hull.pop_back();
    }
    hull.push_back(*it);
  }
  hull.pop_back();  // last point repeats the first

  std::pair<std::size_t, std::size_t> best{hull[0], hull[0]};
  double best_d = -1.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    for (std::size_t j = i + 1; j < hull.size(); ++j) {
      const double dx = pts[hull[i]].x - pts[hull[j]].x;
      const double dy = pts[hull[i]].y - pts[hull[j]].y;
      const double d = dx * dx + dy * dy;
      if (d > best_d) {
        best_d = d;
        best = {hull[i], hull[j]};
      }
    }
  }
  return best;
}

// Classic Douglas-Peucker on an open chain pts[first..last]; marks kept
// indices. Iterative to keep stack depth flat on long zigzags.
inline void dp_chain(const std::vector<MercatorXY>& pts, std::size_t first,
                     std::size_t last, double tolerance, std::vector<char>& keep) {
  keep[first] = 1;
  keep[last] = 1;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{first, last}};
  while (!stack.empty()) {
    const auto [lo, hi] = stack.back();
    stack.pop_back();
    if (hi <= lo + 1) continue;
    double max_d = -1.0;
    std::size_t split = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
      const double d = point_segment_dist(pts[i], pts[lo], pts[hi]);
      if (d > max_d) {
        max_d = d;
        split = i;
      }
    }
    if (max_d > tolerance) {
      keep[split] = 1;
      stack.push_back({lo, split});
      stack.push_back({split, hi});
    }
  }
}

inline Ring dp_once(const Ring& ring, double tolerance) {
  const std::size_t n = ring.points.size();
  // Anchor the closed ring at its two mutually farthest vertices and run the
  // open-chain algorithm on both halves.
  const auto [a, b] = farthest_pair(ring.points);
  if (a == b) return ring;

  std::vector<MercatorXY> rot(n + 1);
  for (std::size_t i = 0; i < n; ++i) rot[i] = ring.points[(a + i) % n];
  rot[n] = rot[0];
  const std::size_t mid = (b + n - a) % n;

  std::vector<char> keep(n + 1, 0);
  dp_chain(rot, 0, mid, tolerance, keep);
  dp_chain(rot, mid, n, tolerance, keep);

  Ring out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!keep[i]) continue;
    if (!out.points.empty() && out.points.back().x == rot[i].x &&
        out.points.back().y == rot[i].y) {
      continue;  // pinch vertices can collapse into consecutive duplicates
    }
    out.points.push_back(rot[i]);
  }
  while (out.points.size() > 1 && out.points.front().x == out.points.back().x &&
         out.points.front().y == out.points.back().y) {
    out.points.pop_back();
  }
  return out;
}

}  // namespace detail

// Douglas-Peucker on a closed ring. Every removed vertex stays within
// tolerance_m of the retained outline. A result that self-intersects is
// retried with the tolerance halved, at most 10 times; the input is returned
// unchanged when no valid simplification exists.
inline Ring simplify_ring_dp(const Ring& ring, double tolerance_m) {
  if (ring.points.size() < 4 || tolerance_m < 0.0) return ring;
  const double orientation = ring_area_planar(ring);
  double tol = tolerance_m;
  for (int attempt = 0; attempt <= 10; ++attempt) {
    Ring out = detail::dp_once(ring, tol);
    if (out.points.size() >= 3 && ring_is_valid(out)) {
      if (orientation * ring_area_planar(out) < 0.0) {
        std::reverse(out.points.begin(), out.points.end());
      }
      return out;
    }
    tol /= 2.0;
  }
  return ring;
}

inline PolygonGeom simplify_polygon(const PolygonGeom& p, double tolerance_m) {
  PolygonGeom out;
  out.exterior = simplify_ring_dp(p.exterior, tolerance_m);
  out.holes.reserve(p.holes.size());
  for (const Ring& h : p.holes) out.holes.push_back(simplify_ring_dp(h, tolerance_m));
  return out;
}

inline MultiPolygonGeom simplify_tolerance(const MultiPolygonGeom& mp, double tolerance_m) {
  MultiPolygonGeom out;
  out.polygons.reserve(mp.polygons.size());
  for (const PolygonGeom& p : mp.polygons) {
    out.polygons.push_back(simplify_polygon(p, tolerance_m));
  }
  return out;
}

// Finds the largest global tolerance that still retains at least
// keep_fraction of all vertices (binary search, 20 iterations over
// [0, bounding-box diagonal]), then applies it per ring.
inline MultiPolygonGeom simplify_keep_fraction(const MultiPolygonGeom& mp,
                                               double keep_fraction) {
  if (!(keep_fraction > 0.0) || keep_fraction > 1.0) {
    throw ValidationError("keep_fraction must be in (0, 1]");
  }
  if (keep_fraction == 1.0 || mp.empty()) return mp;

  const double total = static_cast<double>(mp.vertex_count());
  if (total == 0.0) return mp;
  double lo = 0.0;
  double hi = bounds_of(mp).diagonal();
  double best = 0.0;
  for (int it = 0; it < 20; ++it) {
    const double mid = (lo + hi) / 2.0;
    const double retained =
        static_cast<double>(simplify_tolerance(mp, mid).vertex_count());
    if (retained / total >= keep_fraction) {
      best = mid;
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return simplify_tolerance(mp, best);
}

}  // namespace lotpoly
