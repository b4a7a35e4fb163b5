#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "lotpoly/geojson.hpp"
#include "lotpoly/manifest.hpp"
#include "lotpoly/metrics.hpp"
#include "lotpoly/png_io.hpp"
#include "lotpoly/postprocess.hpp"
#include "lotpoly/report.hpp"
#include "lotpoly/vectorize.hpp"

namespace lotpoly {

// Runs fn(0..n-1) on up to `jobs` threads. Callers write results into
// index-addressed slots, so the merge order never depends on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const int workers = std::min<std::size_t>(jobs, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// Polygons with a per-polygon source tile label, kept parallel through the
// cleanup stages so GeoJSON features stay attributable.
struct LabeledPolygons {
  MultiPolygonGeom geo;
  std::vector<std::string> labels;

  void push(PolygonGeom p, std::string label) {
    geo.polygons.push_back(std::move(p));
    labels.push_back(std::move(label));
  }
};

struct PipelineConfig {
  CleanConfig clean;
  bool dissolve = true;
  std::string buildings_path;
  std::string roads_path;
};

inline nlohmann::ordered_json config_to_json(const PipelineConfig& cfg) {
  nlohmann::ordered_json j;
  j["min_hole_area_m2"] = cfg.clean.min_hole_area_m2;
  j["min_polygon_area_m2"] = cfg.clean.min_polygon_area_m2;
  j["simplify_mode"] =
      cfg.clean.simplify_mode == SimplifyMode::kTolerance ? "tolerance" : "keep_fraction";
  j["tolerance_m"] = cfg.clean.tolerance_m;
  j["keep_fraction"] = cfg.clean.keep_fraction;
  j["lane_width_m"] = cfg.clean.lane_width_m;
  j["default_lanes"] = cfg.clean.default_lanes;
  j["road_margin_m"] = cfg.clean.road_margin_m;
  j["snap_grid_m"] = cfg.clean.snap_grid_m;
  j["dissolve"] = cfg.dissolve;
  j["buildings"] = cfg.buildings_path;
  j["roads"] = cfg.roads_path;
  return j;
}

inline PipelineConfig config_from_json(const nlohmann::json& j) {
  PipelineConfig cfg;
  try {
    cfg.clean.min_hole_area_m2 = j.value("min_hole_area_m2", cfg.clean.min_hole_area_m2);
    cfg.clean.min_polygon_area_m2 =
        j.value("min_polygon_area_m2", cfg.clean.min_polygon_area_m2);
    const std::string mode = j.value("simplify_mode", "tolerance");
    if (mode == "tolerance") {
      cfg.clean.simplify_mode = SimplifyMode::kTolerance;
    } else if (mode == "keep_fraction") {
      cfg.clean.simplify_mode = SimplifyMode::kKeepFraction;
    } else {
      throw ValidationError("simplify_mode must be 'tolerance' or 'keep_fraction'");
    }
    cfg.clean.tolerance_m = j.value("tolerance_m", cfg.clean.tolerance_m);
    cfg.clean.keep_fraction = j.value("keep_fraction", cfg.clean.keep_fraction);
    cfg.clean.lane_width_m = j.value("lane_width_m", cfg.clean.lane_width_m);
    cfg.clean.default_lanes = j.value("default_lanes", cfg.clean.default_lanes);
    cfg.clean.road_margin_m = j.value("road_margin_m", cfg.clean.road_margin_m);
    cfg.clean.snap_grid_m = j.value("snap_grid_m", cfg.clean.snap_grid_m);
    cfg.dissolve = j.value("dissolve", cfg.dissolve);
    cfg.buildings_path = j.value("buildings", cfg.buildings_path);
    cfg.roads_path = j.value("roads", cfg.roads_path);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad config: ") + e.what());
  }
  cfg.clean.validate();
  return cfg;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
  return config_from_json(geojson_detail::parse_file(path));
}

namespace pipeline_detail {

// Union-find over polygons whose bounding boxes touch across different
// source tiles; each cluster dissolves into one polygon chain.
inline LabeledPolygons dissolve_labeled(const LabeledPolygons& in, double snap_grid) {
  const std::size_t n = in.geo.polygons.size();
  if (n < 2) return in;

  std::vector<BBox> boxes(n);
  for (std::size_t i = 0; i < n; ++i) boxes[i] = bounds_of(in.geo.polygons[i]);

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const double pad = snap_grid * 4.0;
  for (std::size_t i = 0; i < n; ++i) {
    BBox padded = boxes[i];
    padded.min_x -= pad;
    padded.min_y -= pad;
    padded.max_x += pad;
    padded.max_y += pad;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (in.labels[i] == in.labels[j]) continue;
      if (padded.intersects(boxes[j])) parent[find(i)] = find(j);
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < n; ++i) clusters[find(i)].push_back(i);

  // Keep first-occurrence order of the earliest member of each cluster.
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> ordered;
  ordered.reserve(clusters.size());
  for (auto& [root, members] : clusters) {
    ordered.emplace_back(*std::min_element(members.begin(), members.end()),
                         std::move(members));
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  LabeledPolygons out;
  for (const auto& [first_idx, members] : ordered) {
    if (members.size() == 1) {
      out.push(in.geo.polygons[members[0]], in.labels[members[0]]);
      continue;
    }
    MultiPolygonGeom cluster;
    std::string label = in.labels[members[0]];
    for (const std::size_t m : members) {
      cluster.polygons.push_back(in.geo.polygons[m]);
      label = std::min(label, in.labels[m]);
    }
    MultiPolygonGeom merged = union_all(cluster, snap_grid);
    for (PolygonGeom& p : merged.polygons) out.push(std::move(p), label);
  }
  return out;
}

// Per-polygon difference that keeps labels; subtrahend must be a valid
// disjoint multipolygon (union the inputs first).
inline LabeledPolygons subtract_labeled(const LabeledPolygons& in,
                                        const MultiPolygonGeom& sub, double snap_grid) {
  if (sub.empty()) return in;
  std::vector<BBox> sub_boxes(sub.polygons.size());
  for (std::size_t i = 0; i < sub.polygons.size(); ++i) {
    sub_boxes[i] = bounds_of(sub.polygons[i]);
  }
  LabeledPolygons out;
  for (std::size_t i = 0; i < in.geo.polygons.size(); ++i) {
    const BBox box = bounds_of(in.geo.polygons[i]);
    MultiPolygonGeom local;
    for (std::size_t s = 0; s < sub.polygons.size(); ++s) {
      if (box.intersects(sub_boxes[s])) local.polygons.push_back(sub.polygons[s]);
    }
    if (local.empty()) {
      out.push(in.geo.polygons[i], in.labels[i]);
      continue;
    }
    MultiPolygonGeom one;
    one.polygons.push_back(in.geo.polygons[i]);
    try {
      MultiPolygonGeom diff = difference(one, local, snap_grid);
      for (PolygonGeom& p : diff.polygons) out.push(std::move(p), in.labels[i]);
    } catch (const GeometryError& e) {
      throw GeometryError("subtracting from polygon " + std::to_string(i) + " (tile " +
                          in.labels[i] + "): " + e.what());
    }
  }
  return out;
}

inline void log_stage(StageLog* log, const std::string& name, const LabeledPolygons& lp) {
  if (!log) return;
  double area = 0.0;
  for (const PolygonGeom& p : lp.geo.polygons) area += polygon_area_m2(p, correction_at(p));
  log->stages.push_back({name, lp.geo.polygons.size(), area});
}

}  // namespace pipeline_detail

// Labeled variant of the cleanup sequence, split so the pipeline can score
// the building stage before roads are subtracted (the road metrics are
// always computed on the building-stage output).
inline LabeledPolygons clean_through_buildings(const LabeledPolygons& in,
                                               const MultiPolygonGeom& footprints,
                                               const CleanConfig& cfg,
                                               StageLog* log = nullptr) {
  cfg.validate();
  LabeledPolygons cur;
  for (std::size_t i = 0; i < in.geo.polygons.size(); ++i) {
    MultiPolygonGeom one;
    one.polygons.push_back(in.geo.polygons[i]);
    one = remove_small_holes(one, cfg.min_hole_area_m2, correction_at(in.geo.polygons[i]));
    cur.push(std::move(one.polygons[0]), in.labels[i]);
  }
  pipeline_detail::log_stage(log, "remove_small_holes", cur);

  LabeledPolygons kept;
  for (std::size_t i = 0; i < cur.geo.polygons.size(); ++i) {
    const PolygonGeom& p = cur.geo.polygons[i];
    if (polygon_area_m2(p, correction_at(p)) >= cfg.min_polygon_area_m2) {
      kept.push(p, cur.labels[i]);
    }
  }
  pipeline_detail::log_stage(log, "remove_small_polygons", kept);

  LabeledPolygons simplified;
  if (cfg.simplify_mode == SimplifyMode::kTolerance) {
    for (std::size_t i = 0; i < kept.geo.polygons.size(); ++i) {
      simplified.push(simplify_polygon(kept.geo.polygons[i], cfg.tolerance_m),
                      kept.labels[i]);
    }
  } else {
    MultiPolygonGeom s = simplify_keep_fraction(kept.geo, cfg.keep_fraction);
    simplified.geo = std::move(s);
    simplified.labels = kept.labels;
  }
  pipeline_detail::log_stage(log, "simplify", simplified);

  LabeledPolygons result =
      pipeline_detail::subtract_labeled(simplified, footprints, cfg.snap_grid_m);
  pipeline_detail::log_stage(log, "subtract_buildings", result);
  return result;
}

inline LabeledPolygons clean_roads_stage(const LabeledPolygons& in,
                                         const std::vector<RoadCenterline>& roads,
                                         const CleanConfig& cfg, StageLog* log = nullptr) {
  LabeledPolygons result =
      roads.empty()
          ? in
          : pipeline_detail::subtract_labeled(in, build_road_buffers(roads, cfg),
                                              cfg.snap_grid_m);
  pipeline_detail::log_stage(log, "subtract_roads", result);
  return result;
}

struct FuseSummary {
  std::vector<std::string> fused_ids;
  std::vector<std::string> skipped;  // ids present on only one side
};

// Per-tile NIR resample and fusion: RGB tiles set the target grid, NIR tiles
// are matched by id and resampled from their own georeferencing.
inline FuseSummary run_fuse(const std::filesystem::path& rgb_dir,
                            const std::filesystem::path& nir_dir,
                            const std::filesystem::path& out_dir, int jobs = 1,
                            std::vector<std::string>* warnings = nullptr) {
  const std::vector<TileRecord> rgb_tiles = build_manifest(rgb_dir, warnings);
  const std::vector<TileRecord> nir_tiles = build_manifest(nir_dir, warnings);
  std::map<std::string, const TileRecord*> nir_by_id;
  for (const TileRecord& t : nir_tiles) nir_by_id[t.id] = &t;

  std::filesystem::create_directories(out_dir);
  FuseSummary summary;
  std::vector<const TileRecord*> work;
  for (const TileRecord& rgb : rgb_tiles) {
    if (nir_by_id.count(rgb.id)) {
      work.push_back(&rgb);
    } else {
      summary.skipped.push_back(rgb.id + " (no NIR tile)");
    }
  }
  for (const TileRecord& nir : nir_tiles) {
    if (std::none_of(rgb_tiles.begin(), rgb_tiles.end(),
                     [&](const TileRecord& r) { return r.id == nir.id; })) {
      summary.skipped.push_back(nir.id + " (no RGB tile)");
    }
  }

  summary.fused_ids.resize(work.size());
  parallel_for(work.size(), jobs, [&](std::size_t i) {
    const TileRecord& rgb_rec = *work[i];
    const TileRecord& nir_rec = *nir_by_id.at(rgb_rec.id);
    const MultiBandImage rgb = read_image_png(rgb_rec.image_path);
    if (rgb.band_count() != 3) {
      throw ValidationError("fuse: " + rgb_rec.image_path.string() + " is not 3-band");
    }
    const BandGrid nir = read_band_png(nir_rec.image_path);
    const GeoTransform rgb_t =
        geotransform_for_tile(rgb_rec.bounds, rgb.width(), rgb.height());
    const GeoTransform nir_t =
        geotransform_for_tile(nir_rec.bounds, nir.width(), nir.height());
    const BandGrid resampled =
        resample_to_grid(nir, nir_t, rgb_t, rgb.width(), rgb.height());
    write_image_png(fuse_nir(rgb, resampled),
                    out_dir / rgb_rec.image_path.filename());
    summary.fused_ids[i] = rgb_rec.id;
  });
  return summary;
}

// Vectorizes every mask tile in a directory; optionally dissolves polygons
// that meet across tile boundaries.
inline LabeledPolygons vectorize_mask_dir(const std::filesystem::path& mask_dir,
                                          bool dissolve, int jobs,
                                          std::vector<std::string>* warnings = nullptr,
                                          double snap_grid = kSnapGridM) {
  const std::vector<TileRecord> tiles = build_manifest(mask_dir, warnings);
  std::vector<MultiPolygonGeom> per_tile(tiles.size());
  parallel_for(tiles.size(), jobs, [&](std::size_t i) {
    const BinaryMask mask = read_mask_png(tiles[i].image_path);
    const GeoTransform t =
        geotransform_for_tile(tiles[i].bounds, mask.width(), mask.height());
    per_tile[i] = vectorize_mask(mask, t);
  });
  LabeledPolygons all;
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    for (PolygonGeom& p : per_tile[i].polygons) {
      all.push(std::move(p), tiles[i].id);
    }
  }
  return dissolve ? pipeline_detail::dissolve_labeled(all, snap_grid) : all;
}

inline void run_vectorize(const std::filesystem::path& mask_dir,
                          const std::filesystem::path& out_geojson, bool dissolve = true,
                          int jobs = 1, std::vector<std::string>* warnings = nullptr) {
  const LabeledPolygons lp = vectorize_mask_dir(mask_dir, dissolve, jobs, warnings);
  write_polygons_geojson(lp.geo, out_geojson, lp.labels);
}

struct EvalInputs {
  // Either a directory of prediction mask tiles or a GeoJSON of polygons
  // rasterized onto the ground-truth grid.
  std::filesystem::path pred_mask_dir;
  std::filesystem::path pred_geojson;
  std::filesystem::path gt_mask_dir;
};

namespace pipeline_detail {

inline void check_matching_ids(const std::vector<TileRecord>& pred,
                               const std::vector<TileRecord>& gt) {
  std::string missing;
  for (const TileRecord& g : gt) {
    if (std::none_of(pred.begin(), pred.end(),
                     [&](const TileRecord& p) { return p.id == g.id; })) {
      missing += missing.empty() ? g.id : ", " + g.id;
    }
  }
  if (!missing.empty()) {
    throw ValidationError("prediction tiles missing for ids: " + missing);
  }
  std::string extra;
  for (const TileRecord& p : pred) {
    if (std::none_of(gt.begin(), gt.end(),
                     [&](const TileRecord& g) { return g.id == p.id; })) {
      extra += extra.empty() ? p.id : ", " + p.id;
    }
  }
  if (!extra.empty()) {
    throw ValidationError("ground-truth tiles missing for ids: " + extra);
  }
}

// Rasterizes the subset of polygons whose boxes reach into the tile.
inline BinaryMask rasterize_for_tile(const MultiPolygonGeom& mp, const TileRecord& tile,
                                     int w, int h) {
  const GeoTransform t = geotransform_for_tile(tile.bounds, w, h);
  const BBox tile_box{tile.bounds.min_x, tile.bounds.min_y, tile.bounds.max_x,
                      tile.bounds.max_y};
  MultiPolygonGeom local;
  for (const PolygonGeom& p : mp.polygons) {
    if (bounds_of(p).intersects(tile_box)) local.polygons.push_back(p);
  }
  return rasterize(local, t, w, h);
}

inline StageMetrics summarize_stage(const std::string& name,
                                    const std::vector<ConfusionCounts>& per_tile,
                                    std::size_t polygon_count, double area_m2) {
  StageMetrics s;
  s.name = name;
  s.polygon_count = polygon_count;
  s.area_m2 = area_m2;
  ConfusionCounts total;
  double miou_sum = 0.0, pw_sum = 0.0;
  for (const ConfusionCounts& c : per_tile) {
    total += c;
    miou_sum += miou(c);
    pw_sum += pixel_accuracy(c);
  }
  s.miou_micro = miou(total);
  s.pw_micro = pixel_accuracy(total);
  const double n = per_tile.empty() ? 1.0 : static_cast<double>(per_tile.size());
  s.miou_macro = miou_sum / n;
  s.pw_macro = pw_sum / n;
  return s;
}

inline double labeled_area(const LabeledPolygons& lp) {
  double a = 0.0;
  for (const PolygonGeom& p : lp.geo.polygons) a += polygon_area_m2(p, correction_at(p));
  return a;
}

}  // namespace pipeline_detail

// Single-stage evaluation: prediction masks (or rasterized polygons) against
// ground-truth masks.
inline RunReport run_eval(const EvalInputs& in, int jobs = 1) {
  RunReport report;
  const std::vector<TileRecord> gt_tiles = build_manifest(in.gt_mask_dir, &report.warnings);
  if (gt_tiles.empty()) throw ValidationError("no ground-truth tiles found");

  const bool from_masks = !in.pred_mask_dir.empty();
  MultiPolygonGeom pred_polys;
  std::vector<TileRecord> pred_tiles;
  if (from_masks) {
    pred_tiles = build_manifest(in.pred_mask_dir, &report.warnings);
    pipeline_detail::check_matching_ids(pred_tiles, gt_tiles);
  } else {
    pred_polys = read_polygons_geojson(in.pred_geojson).geometry;
  }

  std::vector<ConfusionCounts> per_tile(gt_tiles.size());
  std::vector<TileRow> rows(gt_tiles.size());
  parallel_for(gt_tiles.size(), jobs, [&](std::size_t i) {
    const TileRecord& gt_rec = gt_tiles[i];
    const BinaryMask gt = read_mask_png(gt_rec.image_path);
    BinaryMask pred;
    if (from_masks) {
      const auto it = std::find_if(pred_tiles.begin(), pred_tiles.end(),
                                   [&](const TileRecord& p) { return p.id == gt_rec.id; });
      pred = read_mask_png(it->image_path);
      if (pred.width() != gt.width() || pred.height() != gt.height()) {
        throw ValidationError("tile " + gt_rec.id + ": mask dimensions differ");
      }
    } else {
      pred = pipeline_detail::rasterize_for_tile(pred_polys, gt_rec, gt.width(),
                                                 gt.height());
    }
    const ConfusionCounts c = confusion(pred, gt);
    per_tile[i] = c;
    rows[i].id = gt_rec.id;
    rows[i].gt_empty = (c.tp + c.fn) == 0;
    rows[i].pred_empty = (c.tp + c.fp) == 0;
    rows[i].stages.push_back({iou_parking(c), miou(c), pixel_accuracy(c)});
  });

  report.stages.push_back(pipeline_detail::summarize_stage(
      "eval", per_tile, pred_polys.polygons.size(),
      multipolygon_area_m2(pred_polys, 1.0)));
  report.tiles = std::move(rows);
  return report;
}

struct PipelineResult {
  RunReport report;
  LabeledPolygons cleaned;
};

// The full inference-side pass: vectorize prediction masks, clean them in
// the documented stage order, and score each cumulative stage against the
// ground truth.
inline PipelineResult run_pipeline(const std::filesystem::path& pred_dir,
                                   const std::filesystem::path& gt_dir,
                                   const PipelineConfig& cfg, int jobs = 1) {
  using Clock = std::chrono::steady_clock;
  PipelineResult result;
  RunReport& report = result.report;
  report.config_echo = config_to_json(cfg);

  const std::vector<TileRecord> gt_tiles = build_manifest(gt_dir, &report.warnings);
  const std::vector<TileRecord> pred_tiles = build_manifest(pred_dir, &report.warnings);
  if (gt_tiles.empty()) throw ValidationError("no ground-truth tiles found");
  pipeline_detail::check_matching_ids(pred_tiles, gt_tiles);

  MultiPolygonGeom footprints;
  if (!cfg.buildings_path.empty()) {
    footprints = union_all(read_polygons_geojson(cfg.buildings_path).geometry,
                           cfg.clean.snap_grid_m);
  }
  std::vector<RoadCenterline> roads;
  if (!cfg.roads_path.empty()) {
    roads = read_roads_geojson(cfg.roads_path);
  }

  // Stage 1: raw prediction masks, and the vectorized polygons they imply.
  auto t0 = Clock::now();
  std::vector<BinaryMask> gt_masks(gt_tiles.size());
  std::vector<BinaryMask> pred_masks(gt_tiles.size());
  std::vector<ConfusionCounts> original_counts(gt_tiles.size());
  std::vector<MultiPolygonGeom> per_tile_polys(gt_tiles.size());
  parallel_for(gt_tiles.size(), jobs, [&](std::size_t i) {
    const TileRecord& gt_rec = gt_tiles[i];
    gt_masks[i] = read_mask_png(gt_rec.image_path);
    const auto it = std::find_if(pred_tiles.begin(), pred_tiles.end(),
                                 [&](const TileRecord& p) { return p.id == gt_rec.id; });
    pred_masks[i] = read_mask_png(it->image_path);
    if (pred_masks[i].width() != gt_masks[i].width() ||
        pred_masks[i].height() != gt_masks[i].height()) {
      throw ValidationError("tile " + gt_rec.id + ": mask dimensions differ");
    }
    original_counts[i] = confusion(pred_masks[i], gt_masks[i]);
    const GeoTransform t = geotransform_for_tile(gt_rec.bounds, pred_masks[i].width(),
                                                 pred_masks[i].height());
    per_tile_polys[i] = vectorize_mask(pred_masks[i], t);
  });

  LabeledPolygons vectorized;
  for (std::size_t i = 0; i < gt_tiles.size(); ++i) {
    for (PolygonGeom& p : per_tile_polys[i].polygons) {
      vectorized.push(std::move(p), gt_tiles[i].id);
    }
  }
  if (cfg.dissolve) {
    vectorized = pipeline_detail::dissolve_labeled(vectorized, cfg.clean.snap_grid_m);
  }
  StageMetrics original = pipeline_detail::summarize_stage(
      "Original", original_counts, vectorized.geo.polygons.size(),
      pipeline_detail::labeled_area(vectorized));
  original.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();

  // Stage 2: holes, fragments, simplify, building subtraction.
  t0 = Clock::now();
  LabeledPolygons stage_b =
      clean_through_buildings(vectorized, footprints, cfg.clean, &report.clean_audit);
  std::vector<ConfusionCounts> building_counts(gt_tiles.size());
  parallel_for(gt_tiles.size(), jobs, [&](std::size_t i) {
    const BinaryMask m = pipeline_detail::rasterize_for_tile(
        stage_b.geo, gt_tiles[i], gt_masks[i].width(), gt_masks[i].height());
    building_counts[i] = confusion(m, gt_masks[i]);
  });
  StageMetrics with_buildings = pipeline_detail::summarize_stage(
      "w/ Building Removal", building_counts, stage_b.geo.polygons.size(),
      pipeline_detail::labeled_area(stage_b));
  with_buildings.wall_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - t0).count();

  // Stage 3: road subtraction, computed on the building-stage output.
  t0 = Clock::now();
  LabeledPolygons stage_r =
      clean_roads_stage(stage_b, roads, cfg.clean, &report.clean_audit);
  std::vector<ConfusionCounts> road_counts(gt_tiles.size());
  parallel_for(gt_tiles.size(), jobs, [&](std::size_t i) {
    const BinaryMask m = pipeline_detail::rasterize_for_tile(
        stage_r.geo, gt_tiles[i], gt_masks[i].width(), gt_masks[i].height());
    road_counts[i] = confusion(m, gt_masks[i]);
  });
  StageMetrics with_roads = pipeline_detail::summarize_stage(
      "w/ Road Removal", road_counts, stage_r.geo.polygons.size(),
      pipeline_detail::labeled_area(stage_r));
  with_roads.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();

  report.stages = {std::move(original), std::move(with_buildings), std::move(with_roads)};
  report.tiles.resize(gt_tiles.size());
  for (std::size_t i = 0; i < gt_tiles.size(); ++i) {
    TileRow& row = report.tiles[i];
    row.id = gt_tiles[i].id;
    row.gt_empty = (original_counts[i].tp + original_counts[i].fn) == 0;
    row.pred_empty = (original_counts[i].tp + original_counts[i].fp) == 0;
    for (const auto* counts : {&original_counts, &building_counts, &road_counts}) {
      const ConfusionCounts& c = (*counts)[i];
      row.stages.push_back({iou_parking(c), miou(c), pixel_accuracy(c)});
    }
  }
  result.cleaned = std::move(stage_r);
  return result;
}

// Cleans an existing GeoJSON in place of the mask path: read, clean through
// all five stages, write. No metrics (no ground truth involved).
struct CleanResult {
  LabeledPolygons cleaned;
  StageLog audit;
  std::vector<std::string> warnings;
};

inline CleanResult run_clean(const std::filesystem::path& in_geojson,
                             const PipelineConfig& cfg) {
  CleanResult result;
  const GeoJsonPolygons input = read_polygons_geojson(in_geojson);
  LabeledPolygons lp;
  lp.geo = input.geometry;
  lp.labels = input.source_tiles;

  MultiPolygonGeom footprints;
  if (!cfg.buildings_path.empty()) {
    footprints = union_all(read_polygons_geojson(cfg.buildings_path).geometry,
                           cfg.clean.snap_grid_m);
  }
  std::vector<RoadCenterline> roads;
  if (!cfg.roads_path.empty()) {
    roads = read_roads_geojson(cfg.roads_path);
  }
  LabeledPolygons stage_b = clean_through_buildings(lp, footprints, cfg.clean,
                                                    &result.audit);
  result.cleaned = clean_roads_stage(stage_b, roads, cfg.clean, &result.audit);
  return result;
}

}  // namespace lotpoly
