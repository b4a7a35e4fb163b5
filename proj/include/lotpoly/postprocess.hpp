#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lotpoly/buffer.hpp"
#include "lotpoly/clip.hpp"
#include "lotpoly/geometry.hpp"
#include "lotpoly/simplify.hpp"

namespace lotpoly {

enum class SimplifyMode { kTolerance, kKeepFraction };

struct CleanConfig {
  double min_hole_area_m2 = 60.0;
  double min_polygon_area_m2 = 60.0;
  SimplifyMode simplify_mode = SimplifyMode::kTolerance;
  double tolerance_m = 0.5;
  double keep_fraction = 1.0;
  double lane_width_m = 3.7;
  int default_lanes = 2;
  double road_margin_m = 0.0;
  double snap_grid_m = kSnapGridM;

  void validate() const {
    if (min_hole_area_m2 < 0 || min_polygon_area_m2 < 0 || tolerance_m < 0 ||
        lane_width_m < 0 || road_margin_m < 0) {
      throw ValidationError("CleanConfig lengths and areas must be >= 0");
    }
    if (!(keep_fraction > 0.0) || keep_fraction > 1.0) {
      throw ValidationError("CleanConfig keep_fraction must be in (0, 1]");
    }
    if (default_lanes < 1) {
      throw ValidationError("CleanConfig default_lanes must be >= 1");
    }
  }
};

struct RoadCenterline {
  std::vector<MercatorXY> points;  // >= 2, consecutive points distinct
  std::optional<int> lanes;
};

inline double road_width_m(std::optional<int> lanes, const CleanConfig& cfg) {
  const int n = lanes.value_or(cfg.default_lanes);
  return n * cfg.lane_width_m + 2.0 * cfg.road_margin_m;
}

// Deletes interior rings whose corrected area falls below the threshold.
// Exteriors are untouched, so total area can only grow.
inline MultiPolygonGeom remove_small_holes(const MultiPolygonGeom& mp, double min_area_m2,
                                           double correction) {
  MultiPolygonGeom out;
  out.polygons.reserve(mp.polygons.size());
  for (const PolygonGeom& p : mp.polygons) {
    PolygonGeom q;
    q.exterior = p.exterior;
    for (const Ring& h : p.holes) {
      if (std::fabs(ring_area_planar(h)) * correction >= min_area_m2) {
        q.holes.push_back(h);
      }
    }
    out.polygons.push_back(std::move(q));
  }
  return out;
}

// Deletes whole polygons whose corrected area falls below the threshold.
inline MultiPolygonGeom remove_small_polygons(const MultiPolygonGeom& mp,
                                              double min_area_m2, double correction) {
  MultiPolygonGeom out;
  out.polygons.reserve(mp.polygons.size());
  for (const PolygonGeom& p : mp.polygons) {
    if (polygon_area_m2(p, correction) >= min_area_m2) {
      out.polygons.push_back(p);
    }
  }
  return out;
}

// Per-polygon latitude correction variants used by the pipeline; thresholds
// are true ground areas, tiles live in projected meters.
inline MultiPolygonGeom remove_small_holes_per_polygon(const MultiPolygonGeom& mp,
                                                       double min_area_m2) {
  MultiPolygonGeom out;
  out.polygons.reserve(mp.polygons.size());
  for (const PolygonGeom& p : mp.polygons) {
    MultiPolygonGeom one;
    one.polygons.push_back(p);
    MultiPolygonGeom cleaned = remove_small_holes(one, min_area_m2, correction_at(p));
    out.polygons.push_back(std::move(cleaned.polygons[0]));
  }
  return out;
}

inline MultiPolygonGeom remove_small_polygons_per_polygon(const MultiPolygonGeom& mp,
                                                          double min_area_m2) {
  MultiPolygonGeom out;
  out.polygons.reserve(mp.polygons.size());
  for (const PolygonGeom& p : mp.polygons) {
    if (polygon_area_m2(p, correction_at(p)) >= min_area_m2) {
      out.polygons.push_back(p);
    }
  }
  return out;
}

inline MultiPolygonGeom build_road_buffers(const std::vector<RoadCenterline>& roads,
                                           const CleanConfig& cfg) {
  MultiPolygonGeom buffers;
  buffers.polygons.reserve(roads.size());
  for (const RoadCenterline& road : roads) {
    buffers.polygons.push_back(
        buffer_centerline(road.points, road_width_m(road.lanes, cfg)));
  }
  // Buffers of crossing roads overlap; union them so the subtrahend is a
  // valid multipolygon.
  return union_all(buffers, cfg.snap_grid_m);
}

struct StageRecord {
  std::string name;
  std::size_t polygon_count = 0;
  double area_m2 = 0.0;
};

struct StageLog {
  std::vector<StageRecord> stages;
};

namespace detail {

inline double corrected_area(const MultiPolygonGeom& mp) {
  double a = 0.0;
  for (const PolygonGeom& p : mp.polygons) a += polygon_area_m2(p, correction_at(p));
  return a;
}

inline void log_stage(StageLog* log, const std::string& name, const MultiPolygonGeom& mp) {
  if (!log) return;
  log->stages.push_back({name, mp.polygons.size(), corrected_area(mp)});
}

}  // namespace detail

// The full cleanup sequence: fill small holes, drop small fragments,
// simplify edges, subtract building footprints, subtract road buffers.
inline MultiPolygonGeom clean_pipeline(const MultiPolygonGeom& input,
                                       const MultiPolygonGeom& footprints,
                                       const std::vector<RoadCenterline>& roads,
                                       const CleanConfig& cfg, StageLog* log = nullptr) {
  cfg.validate();

  MultiPolygonGeom cur = remove_small_holes_per_polygon(input, cfg.min_hole_area_m2);
  detail::log_stage(log, "remove_small_holes", cur);

  cur = remove_small_polygons_per_polygon(cur, cfg.min_polygon_area_m2);
  detail::log_stage(log, "remove_small_polygons", cur);

  cur = cfg.simplify_mode == SimplifyMode::kTolerance
            ? simplify_tolerance(cur, cfg.tolerance_m)
            : simplify_keep_fraction(cur, cfg.keep_fraction);
  detail::log_stage(log, "simplify", cur);

  if (!footprints.empty()) {
    cur = difference(cur, footprints, cfg.snap_grid_m);
  }
  detail::log_stage(log, "subtract_buildings", cur);

  if (!roads.empty()) {
    cur = difference(cur, build_road_buffers(roads, cfg), cfg.snap_grid_m);
  }
  detail::log_stage(log, "subtract_roads", cur);

  return cur;
}

}  // namespace lotpoly
