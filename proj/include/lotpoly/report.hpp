#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lotpoly/error.hpp"
#include "lotpoly/metrics.hpp"
#include "lotpoly/postprocess.hpp"

namespace lotpoly {

// Metrics for one evaluation stage. Micro aggregates pixel counts over all
// tiles before computing the metric; macro averages per-tile metrics.
struct StageMetrics {
  std::string name;
  double miou_micro = 0.0;
  double pw_micro = 0.0;
  double miou_macro = 0.0;
  double pw_macro = 0.0;
  std::size_t polygon_count = 0;
  double area_m2 = 0.0;
  double wall_ms = 0.0;  // shown in the table, kept out of the JSON
};

struct TileStageMetrics {
  double iou_parking = 0.0;
  double miou = 0.0;
  double pw = 0.0;
};

struct TileRow {
  std::string id;
  bool gt_empty = false;    // 0/0 IoU convention applied; see metrics docs
  bool pred_empty = false;
  std::vector<TileStageMetrics> stages;  // parallel to RunReport::stages
};

struct RunReport {
  nlohmann::ordered_json config_echo;
  std::vector<StageMetrics> stages;  // pipeline order
  StageLog clean_audit;              // the five cleanup stages
  std::vector<TileRow> tiles;
  std::vector<std::string> warnings;
};

namespace report_detail {

inline nlohmann::ordered_json round6(double v) {
  // Fixed precision keeps report bytes stable across runs.
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return nlohmann::ordered_json::parse(buf);
}

}  // namespace report_detail

inline nlohmann::ordered_json report_to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["config"] = r.config_echo;
  j["stages"] = nlohmann::ordered_json::array();
  for (const StageMetrics& s : r.stages) {
    nlohmann::ordered_json js;
    js["name"] = s.name;
    js["miou_micro"] = report_detail::round6(s.miou_micro);
    js["pw_micro"] = report_detail::round6(s.pw_micro);
    js["miou_macro"] = report_detail::round6(s.miou_macro);
    js["pw_macro"] = report_detail::round6(s.pw_macro);
    js["polygon_count"] = s.polygon_count;
    js["area_m2"] = report_detail::round6(s.area_m2);
    j["stages"].push_back(std::move(js));
  }
  j["clean_audit"] = nlohmann::ordered_json::array();
  for (const StageRecord& s : r.clean_audit.stages) {
    nlohmann::ordered_json js;
    js["name"] = s.name;
    js["polygon_count"] = s.polygon_count;
    js["area_m2"] = report_detail::round6(s.area_m2);
    j["clean_audit"].push_back(std::move(js));
  }
  j["tiles"] = nlohmann::ordered_json::array();
  for (const TileRow& row : r.tiles) {
    nlohmann::ordered_json jt;
    jt["id"] = row.id;
    jt["gt_empty"] = row.gt_empty;
    jt["pred_empty"] = row.pred_empty;
    jt["stages"] = nlohmann::ordered_json::array();
    for (const TileStageMetrics& s : row.stages) {
      nlohmann::ordered_json js;
      js["iou_parking"] = report_detail::round6(s.iou_parking);
      js["miou"] = report_detail::round6(s.miou);
      js["pw"] = report_detail::round6(s.pw);
      jt["stages"].push_back(std::move(js));
    }
    j["tiles"].push_back(std::move(jt));
  }
  j["warnings"] = r.warnings;
  return j;
}

inline void write_report_json(const RunReport& r, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot create " + path.string());
  f << report_to_json(r).dump(2) << '\n';
  if (!f) throw IoError("write failed: " + path.string());
}

inline std::string render_table(const RunReport& r) {
  std::string out;
  char line[256];
  out += "stage                     mIoU(micro)  PW(micro)  mIoU(macro)  PW(macro)"
         "  polygons      area m2    wall ms\n";
  for (const StageMetrics& s : r.stages) {
    std::snprintf(line, sizeof(line),
                  "%-24s  %11.4f  %9.4f  %11.4f  %9.4f  %8zu  %11.1f  %9.1f\n",
                  s.name.c_str(), s.miou_micro, s.pw_micro, s.miou_macro, s.pw_macro,
                  s.polygon_count, s.area_m2, s.wall_ms);
    out += line;
  }
  if (!r.clean_audit.stages.empty()) {
    out += "\ncleanup audit:\n";
    for (const StageRecord& s : r.clean_audit.stages) {
      std::snprintf(line, sizeof(line), "  %-22s  %8zu polygons  %14.1f m2\n",
                    s.name.c_str(), s.polygon_count, s.area_m2);
      out += line;
    }
  }
  for (const std::string& w : r.warnings) {
    out += "warning: " + w + "\n";
  }
  return out;
}

}  // namespace lotpoly
