#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "lotpoly/geometry.hpp"
#include "lotpoly/raster.hpp"

namespace lotpoly {

namespace detail {

// Labels 4-connected components of 1-pixels; returns component count.
// labels[i] is -1 for background.
inline int label_components(const BinaryMask& m, std::vector<std::int32_t>& labels) {
  const int w = m.width(), h = m.height();
  labels.assign(static_cast<std::size_t>(w) * h, -1);
  int next = 0;
  std::vector<std::int32_t> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::int32_t start = y * w + x;
      if (m.values()[start] == 0 || labels[start] != -1) continue;
      labels[start] = next;
      stack.assign(1, start);
      while (!stack.empty()) {
        const std::int32_t cur = stack.back();
        stack.pop_back();
        const int cx = cur % w, cy = cur / w;
        const std::array<std::array<int, 2>, 4> nbrs{{{cx - 1, cy}, {cx + 1, cy},
                                                      {cx, cy - 1}, {cx, cy + 1}}};
        for (const auto& n : nbrs) {
          if (n[0] < 0 || n[0] >= w || n[1] < 0 || n[1] >= h) continue;
          const std::int32_t ni = n[1] * w + n[0];
          if (m.values()[ni] != 0 && labels[ni] == -1) {
            labels[ni] = next;
            stack.push_back(ni);
          }
        }
      }
      ++next;
    }
  }
  return next;
}

struct TraceEdge {
  std::int32_t from_v;
  std::int32_t to_v;
  std::int32_t cell;  // FG cell the edge borders, y*w + x
};

struct GridLoop {
  std::vector<std::int32_t> vertices;  // grid vertex ids, open (implicit close)
  std::int32_t component;
  double grid_area;  // shoelace in grid coordinates (y down)
};

}  // namespace detail

// Traces the boundary of the union of the world-space squares of all
// 1-pixels. Foreground components are 4-connected; background enclaves are
// 8-connected, which is realized by the pinch rule below: where two diagonal
// foreground pixels meet at a corner, the boundary hugs each pixel's corner
// instead of joining them, so background flows through the gap. Rings may
// revisit such corner vertices but never cross.
inline MultiPolygonGeom vectorize_mask(const BinaryMask& m, const GeoTransform& t) {
  const int w = m.width(), h = m.height();
  const int vw = w + 1;  // grid vertex columns

  std::vector<std::int32_t> labels;
  const int n_comp = detail::label_components(m, labels);
  if (n_comp == 0) return {};

  const auto fg = [&](int x, int y) {
    return x >= 0 && x < w && y >= 0 && y < h && m.values()[y * w + x] != 0;
  };
  const auto vid = [&](int col, int row) { return row * vw + col; };

  // Directed boundary edges, foreground kept on the left in world space
  // (CCW exteriors, CW holes after the y flip).
  std::vector<detail::TraceEdge> edges;
  edges.reserve(static_cast<std::size_t>(w) * 4);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!fg(x, y)) continue;
      const std::int32_t cell = y * w + x;
      if (!fg(x, y - 1)) edges.push_back({vid(x + 1, y), vid(x, y), cell});
      if (!fg(x, y + 1)) edges.push_back({vid(x, y + 1), vid(x + 1, y + 1), cell});
      if (!fg(x - 1, y)) edges.push_back({vid(x, y), vid(x, y + 1), cell});
      if (!fg(x + 1, y)) edges.push_back({vid(x + 1, y + 1), vid(x + 1, y), cell});
    }
  }

  // Outgoing edge slots per grid vertex; only saddle vertices use both.
  std::vector<std::int32_t> out0(static_cast<std::size_t>(vw) * (h + 1), -1);
  std::vector<std::int32_t> out1(out0.size(), -1);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::int32_t v = edges[i].from_v;
    (out0[v] == -1 ? out0[v] : out1[v]) = static_cast<std::int32_t>(i);
  }

  const auto successor = [&](const detail::TraceEdge& e) {
    const std::int32_t a = out0[e.to_v], b = out1[e.to_v];
    if (b == -1) return a;
    // Saddle: continue around the incoming edge's own pixel.
    return edges[a].cell == e.cell ? a : b;
  };

  std::vector<bool> used(edges.size(), false);
  std::vector<detail::GridLoop> loops;
  std::vector<std::int32_t> path;
  for (std::size_t start = 0; start < edges.size(); ++start) {
    if (used[start]) continue;
    path.clear();
    std::int32_t cur = static_cast<std::int32_t>(start);
    do {
      used[cur] = true;
      path.push_back(cur);
      cur = successor(edges[cur]);
    } while (cur != static_cast<std::int32_t>(start));

    // Collapse collinear runs: keep a vertex only where direction changes.
    detail::GridLoop loop;
    loop.component = labels[edges[start].cell];
    const std::size_t n = path.size();
    const auto dir_of = [&](std::size_t i) {
      const detail::TraceEdge& e = edges[path[i]];
      return e.to_v - e.from_v;  // one of {+-1, +-vw}
    };
    for (std::size_t i = 0; i < n; ++i) {
      if (dir_of((i + n - 1) % n) != dir_of(i)) {
        loop.vertices.push_back(edges[path[i]].from_v);
      }
    }
    double area2 = 0.0;
    const std::size_t k = loop.vertices.size();
    for (std::size_t i = 0; i < k; ++i) {
      const std::int32_t va = loop.vertices[i];
      const std::int32_t vb = loop.vertices[(i + 1) % k];
      const double ax = va % vw, ay = va / vw;
      const double bx = vb % vw, by = vb / vw;
      area2 += ax * by - bx * ay;
    }
    loop.grid_area = area2 / 2.0;
    loops.push_back(std::move(loop));
  }

  // Grid y points down, world y up: winding flips, so grid-CW loops are the
  // world-CCW exteriors.
  std::vector<PolygonGeom> polys(n_comp);
  const auto to_world_ring = [&](const detail::GridLoop& loop) {
    Ring r;
    r.points.reserve(loop.vertices.size());
    for (const std::int32_t v : loop.vertices) {
      r.points.push_back(pixel_to_world(t, v % vw, v / vw));
    }
    canonicalize_start(r);
    return r;
  };
  for (const detail::GridLoop& loop : loops) {
    if (loop.grid_area < 0.0) {
      polys[loop.component].exterior = to_world_ring(loop);
    } else {
      polys[loop.component].holes.push_back(to_world_ring(loop));
    }
  }

  MultiPolygonGeom mp;
  mp.polygons = std::move(polys);
  return mp;
}

// Fills pixels whose centers fall inside the multipolygon, even-odd rule.
inline BinaryMask rasterize(const MultiPolygonGeom& mp, const GeoTransform& t,
                            int w, int h) {
  BinaryMask out(w, h);
  if (mp.empty()) return out;

  std::vector<std::vector<double>> row_hits(h);
  const auto add_ring = [&](const Ring& ring) {
    const std::size_t n = ring.points.size();
    for (std::size_t i = 0; i < n; ++i) {
      const MercatorXY& a = ring.points[i];
      const MercatorXY& b = ring.points[(i + 1) % n];
      if (a.y == b.y) continue;
      const double ymin = std::min(a.y, b.y);
      const double ymax = std::max(a.y, b.y);
      // Row centers cy(r) = origin_y - (r + 0.5) * ph with cy in [ymin, ymax).
      const double lo = (t.origin_y - ymax) / t.pixel_h - 0.5;
      const double hi = (t.origin_y - ymin) / t.pixel_h - 0.5;
      const int r_first = std::max(0, static_cast<int>(std::floor(lo)) + 1);
      const int r_last = std::min(h - 1, static_cast<int>(std::floor(hi)));
      for (int r = r_first; r <= r_last; ++r) {
        const double cy = t.origin_y - (r + 0.5) * t.pixel_h;
        if ((a.y > cy) == (b.y > cy)) continue;
        row_hits[r].push_back(a.x + (cy - a.y) * (b.x - a.x) / (b.y - a.y));
      }
    }
  };
  for (const PolygonGeom& p : mp.polygons) {
    add_ring(p.exterior);
    for (const Ring& hole : p.holes) add_ring(hole);
  }

  for (int r = 0; r < h; ++r) {
    std::vector<double>& xs = row_hits[r];
    if (xs.empty()) continue;
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
      // Columns whose centers cx = origin_x + (c + 0.5) * pw lie in [x0, x1).
      const int c_first = std::max(
          0, static_cast<int>(std::ceil((xs[i] - t.origin_x) / t.pixel_w - 0.5)));
      const int c_end = std::min(
          w, static_cast<int>(std::ceil((xs[i + 1] - t.origin_x) / t.pixel_w - 0.5)));
      for (int c = c_first; c < c_end; ++c) out.set(c, r, true);
    }
  }
  return out;
}

}  // namespace lotpoly
