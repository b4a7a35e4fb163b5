#pragma once

#include <random>
#include <vector>

#include "lotpoly/geometry.hpp"
#include "lotpoly/raster.hpp"

namespace lotpoly::testutil {

inline BinaryMask random_mask(std::mt19937_64& rng, int w, int h, double density) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::uint8_t> v(static_cast<std::size_t>(w) * h);
  for (auto& b : v) b = u(rng) < density ? 1 : 0;
  return BinaryMask(w, h, std::move(v));
}

// Independent 4-connected component counter (plain flood fill).
inline int component_count_oracle(const BinaryMask& m) {
  const int w = m.width(), h = m.height();
  std::vector<char> seen(static_cast<std::size_t>(w) * h, 0);
  std::vector<int> stack;
  int count = 0;
  for (int i = 0; i < w * h; ++i) {
    if (m.values()[i] == 0 || seen[i]) continue;
    ++count;
    seen[i] = 1;
    stack.assign(1, i);
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      const int x = cur % w, y = cur / w;
      const int nb[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
      for (const auto& n : nb) {
        if (n[0] < 0 || n[0] >= w || n[1] < 0 || n[1] >= h) continue;
        const int ni = n[1] * w + n[0];
        if (m.values()[ni] != 0 && !seen[ni]) {
          seen[ni] = 1;
          stack.push_back(ni);
        }
      }
    }
  }
  return count;
}

inline Ring make_ring(std::initializer_list<MercatorXY> pts) {
  Ring r;
  r.points.assign(pts);
  return r;
}

inline PolygonGeom rect_polygon(double x0, double y0, double x1, double y1) {
  PolygonGeom p;
  p.exterior = make_ring({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
  return p;
}

}  // namespace lotpoly::testutil
