#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "lotpoly/geojson.hpp"
#include "lotpoly/manifest.hpp"
#include "lotpoly/png_io.hpp"
#include "lotpoly/postprocess.hpp"
#include "lotpoly/raster.hpp"

namespace lotpoly {

struct SynthOptions {
  std::uint64_t seed = 7;
  int n_tiles = 50;
  int tile_px = 512;
  double pixel_m = 0.3;
};

struct SynthSummary {
  std::vector<std::string> tile_ids;
  double mean_gt_coverage = 0.0;
  std::size_t building_count = 0;
  std::size_t road_count = 0;
};

namespace synth_detail {

// mt19937_64 driven helpers; std distributions are implementation-defined,
// these are not.
class DetRng {
public:
  explicit DetRng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return (eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive
    return std::min(hi, lo + static_cast<int>(uniform() * (hi - lo + 1)));
  }
  bool chance(double p) { return uniform() < p; }

private:
  std::mt19937_64 eng_;
};

struct PixelRect {  // half-open [x0,x1) x [y0,y1) in tile pixels
  int x0, y0, x1, y1;

  bool intersects(const PixelRect& o, int pad = 0) const {
    return x0 - pad < o.x1 && o.x0 < x1 + pad && y0 - pad < o.y1 && o.y0 < y1 + pad;
  }
  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
};

inline void fill_rect(std::vector<std::uint8_t>& px, int tile, const PixelRect& r,
                      std::uint8_t v) {
  for (int y = std::max(0, r.y0); y < std::min(tile, r.y1); ++y) {
    for (int x = std::max(0, r.x0); x < std::min(tile, r.x1); ++x) {
      px[static_cast<std::size_t>(y) * tile + x] = v;
    }
  }
}

inline PolygonGeom rect_to_world(const PixelRect& r, const GeoTransform& t) {
  PolygonGeom p;
  const MercatorXY tl = pixel_to_world(t, r.x0, r.y0);
  const MercatorXY br = pixel_to_world(t, r.x1, r.y1);
  p.exterior.points = {{tl.x, br.y}, {br.x, br.y}, {br.x, tl.y}, {tl.x, tl.y}};
  return p;
}

}  // namespace synth_detail

// Writes a deterministic fixture set: ground-truth masks with rectangular
// and compound lots around 21% coverage, degraded prediction masks (interior
// holes under 60 m2, edge bumps, roof spills, road strips), and the matching
// buildings and roads GeoJSON.
inline SynthSummary generate_fixtures(const SynthOptions& opt,
                                      const std::filesystem::path& out_root) {
  namespace fs = std::filesystem;
  using synth_detail::DetRng;
  using synth_detail::PixelRect;

  if (opt.n_tiles < 1 || opt.tile_px < 64) {
    throw ValidationError("synth needs n_tiles >= 1 and tile_px >= 64");
  }
  const fs::path gt_dir = out_root / "gt";
  const fs::path pred_dir = out_root / "pred";
  fs::create_directories(gt_dir);
  fs::create_directories(pred_dir);

  DetRng rng(opt.seed);
  const int tile = opt.tile_px;
  const double span = tile * opt.pixel_m;
  const int grid_cols = std::max(1, static_cast<int>(std::ceil(std::sqrt(opt.n_tiles))));

  SynthSummary summary;
  MultiPolygonGeom buildings;
  std::vector<RoadCenterline> roads;
  double coverage_sum = 0.0;

  for (int i = 0; i < opt.n_tiles; ++i) {
    const int gx = i % grid_cols;
    const int gy = i / grid_cols;
    const TileBounds bounds{gx * span, gy * span, (gx + 1) * span, (gy + 1) * span};
    const GeoTransform t = geotransform_for_tile(bounds, tile, tile);

    char id[32];
    std::snprintf(id, sizeof(id), "synth_%04d", i);
    summary.tile_ids.push_back(id);

    std::vector<std::uint8_t> gt(static_cast<std::size_t>(tile) * tile, 0);
    std::vector<std::uint8_t> pred;

    // Ground truth lots: axis-aligned rectangles, half of them compounded
    // with a second overlapping rectangle. Sizes scale with the tile so the
    // target coverage holds away from the 512 px default.
    const int margin = std::max(8, tile * 14 / 512);
    const auto scaled = [tile](int px512) { return std::max(4, px512 * tile / 512); };
    std::vector<PixelRect> lots;
    const int n_lots = rng.uniform_int(2, 4);
    for (int k = 0; k < n_lots; ++k) {
      const int w = rng.uniform_int(scaled(72), scaled(208));
      const int h = rng.uniform_int(scaled(72), scaled(208));
      const int x0 = rng.uniform_int(margin, tile - margin - w);
      const int y0 = rng.uniform_int(margin, tile - margin - h);
      PixelRect lot{x0, y0, x0 + w, y0 + h};
      synth_detail::fill_rect(gt, tile, lot, 1);
      if (rng.chance(0.5)) {
        const int w2 = rng.uniform_int(scaled(40), scaled(120));
        const int h2 = rng.uniform_int(scaled(40), scaled(120));
        const int x2 = std::clamp(x0 + rng.uniform_int(-scaled(40), w - scaled(40)),
                                  margin, tile - margin - w2);
        const int y2 = std::clamp(y0 + rng.uniform_int(-scaled(40), h - scaled(40)),
                                  margin, tile - margin - h2);
        const PixelRect ext{x2, y2, x2 + w2, y2 + h2};
        synth_detail::fill_rect(gt, tile, ext, 1);
        lot = {std::min(lot.x0, ext.x0), std::min(lot.y0, ext.y0),
               std::max(lot.x1, ext.x1), std::max(lot.y1, ext.y1)};
      }
      lots.push_back(lot);
    }

    pred = gt;

    // Interior holes, all below the 60 m2 threshold.
    for (const PixelRect& lot : lots) {
      const int n_holes = rng.uniform_int(0, 2);
      for (int k = 0; k < n_holes; ++k) {
        const int side = rng.uniform_int(4, 20);
        if (lot.width() < side + 8 || lot.height() < side + 8) continue;
        const int hx = rng.uniform_int(lot.x0 + 4, lot.x1 - 4 - side);
        const int hy = rng.uniform_int(lot.y0 + 4, lot.y1 - 4 - side);
        synth_detail::fill_rect(pred, tile, {hx, hy, hx + side, hy + side}, 0);
      }
    }

    // Edge bumps: small protrusions along lot borders.
    for (const PixelRect& lot : lots) {
      const int n_bumps = rng.uniform_int(4, 10);
      for (int k = 0; k < n_bumps; ++k) {
        const int side = rng.uniform_int(1, 2);
        const int edge = rng.uniform_int(0, 3);
        int bx = 0, by = 0;
        switch (edge) {
          case 0: bx = rng.uniform_int(lot.x0, lot.x1 - side); by = lot.y0 - side; break;
          case 1: bx = rng.uniform_int(lot.x0, lot.x1 - side); by = lot.y1; break;
          case 2: bx = lot.x0 - side; by = rng.uniform_int(lot.y0, lot.y1 - side); break;
          default: bx = lot.x1; by = rng.uniform_int(lot.y0, lot.y1 - side); break;
        }
        synth_detail::fill_rect(pred, tile, {bx, by, bx + side, by + side}, 1);
      }
    }

    // Buildings: placed clear of lots; most of them spill into the
    // prediction as roof misclassifications.
    const int n_buildings = rng.uniform_int(3, 5);
    std::vector<PixelRect> placed_buildings;
    for (int k = 0; k < n_buildings; ++k) {
      for (int attempt = 0; attempt < 30; ++attempt) {
        const int w = rng.uniform_int(scaled(24), scaled(64));
        const int h = rng.uniform_int(scaled(24), scaled(64));
        const int x0 = rng.uniform_int(margin, tile - margin - w);
        const int y0 = rng.uniform_int(margin, tile - margin - h);
        const PixelRect b{x0, y0, x0 + w, y0 + h};
        bool clear = true;
        for (const PixelRect& lot : lots) clear = clear && !b.intersects(lot, 6);
        for (const PixelRect& other : placed_buildings) {
          clear = clear && !b.intersects(other, 2);
        }
        if (!clear) continue;
        placed_buildings.push_back(b);
        buildings.polygons.push_back(synth_detail::rect_to_world(b, t));
        ++summary.building_count;
        if (rng.chance(0.85)) {
          synth_detail::fill_rect(pred, tile, b, 1);
        }
        break;
      }
    }

    // One road per tile when a clear corridor exists; the prediction gains
    // the full strip, the GeoJSON gains the centerline with a lane count.
    if (rng.chance(0.8)) {
      const int lanes = rng.uniform_int(1, 4);
      const double half_width_px = lanes * 3.7 / opt.pixel_m / 2.0;
      const int pad = static_cast<int>(half_width_px) + 3;
      for (int attempt = 0; attempt < 40; ++attempt) {
        const bool horizontal = rng.chance(0.5);
        const int pos = rng.uniform_int(pad + 2, tile - pad - 3);
        const PixelRect corridor =
            horizontal ? PixelRect{0, pos - pad, tile, pos + pad + 1}
                       : PixelRect{pos - pad, 0, pos + pad + 1, tile};
        bool clear = true;
        for (const PixelRect& lot : lots) clear = clear && !corridor.intersects(lot, 2);
        if (!clear) continue;

        // Strip of pixels whose centers fall within the buffer width.
        for (int c = 0; c < tile; ++c) {
          const double d = std::fabs(static_cast<double>(c) - pos);
          if (d > half_width_px) continue;
          if (horizontal) {
            synth_detail::fill_rect(pred, tile, {0, c, tile, c + 1}, 1);
          } else {
            synth_detail::fill_rect(pred, tile, {c, 0, c + 1, tile}, 1);
          }
        }
        RoadCenterline road;
        const double center = pos + 0.5;
        if (horizontal) {
          road.points = {pixel_to_world(t, -2.0, center),
                         pixel_to_world(t, tile + 2.0, center)};
        } else {
          road.points = {pixel_to_world(t, center, -2.0),
                         pixel_to_world(t, center, tile + 2.0)};
        }
        road.lanes = lanes;
        roads.push_back(std::move(road));
        ++summary.road_count;
        break;
      }
    }

    BinaryMask gt_mask(tile, tile, std::move(gt));
    BinaryMask pred_mask(tile, tile, std::move(pred));
    coverage_sum += static_cast<double>(gt_mask.count_ones()) / (tile * tile);

    const std::string filename = tile_filename(id, bounds);
    write_mask_png(gt_mask, gt_dir / filename);
    write_mask_png(pred_mask, pred_dir / filename);
  }

  summary.mean_gt_coverage = coverage_sum / opt.n_tiles;
  write_polygons_geojson(buildings, out_root / "buildings.geojson");
  write_roads_geojson(roads, out_root / "roads.geojson");
  return summary;
}

}  // namespace lotpoly
