#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lotpoly/error.hpp"
#include "lotpoly/geometry.hpp"
#include "lotpoly/postprocess.hpp"

namespace lotpoly {

struct GeoJsonPolygons {
  MultiPolygonGeom geometry;
  std::vector<std::string> source_tiles;  // parallel to geometry.polygons
};

namespace geojson_detail {

inline std::string fmt_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.7f", v);
  return buf;
}

inline std::string fmt_area(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

inline std::string escape_json(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

// Ring vertices as 7-decimal lon/lat strings, consecutive duplicates at that
// resolution removed. A ring thinner than the wire resolution collapses to
// fewer than 3 points and is dropped by the caller.
inline std::vector<std::pair<std::string, std::string>> wire_ring(const Ring& r) {
  std::vector<std::pair<std::string, std::string>> pts;
  pts.reserve(r.points.size());
  for (const MercatorXY& p : r.points) {
    const LonLat ll = mercator_to_lonlat(p);
    std::pair<std::string, std::string> s{fmt_coord(ll.lon), fmt_coord(ll.lat)};
    if (pts.empty() || pts.back() != s) pts.push_back(std::move(s));
  }
  while (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
  return pts;
}

// Ring as "[[lon,lat],...]" with the first point repeated last per RFC 7946.
inline void append_ring(std::string& out,
                        const std::vector<std::pair<std::string, std::string>>& pts) {
  out += '[';
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i <= n; ++i) {
    if (i) out += ',';
    out += '[';
    out += pts[i % n].first;
    out += ',';
    out += pts[i % n].second;
    out += ']';
  }
  out += ']';
}

inline nlohmann::json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("malformed JSON in " + path.string() + " at byte " +
                          std::to_string(e.byte) + ": " + e.what());
  }
}

inline MercatorXY parse_position(const nlohmann::json& pos, std::size_t feature_index) {
  if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
    throw ValidationError("feature " + std::to_string(feature_index) +
                          ": position is not a [lon, lat] pair");
  }
  double lon = pos[0].get<double>();
  double lat = pos[1].get<double>();
  // 7-decimal output can round a boundary coordinate just past the limit.
  if (std::fabs(lon) <= 180.0 + 1e-6) lon = std::clamp(lon, -180.0, 180.0);
  if (std::fabs(lat) <= kMercatorMaxLatDeg + 1e-6) {
    lat = std::clamp(lat, -kMercatorMaxLatDeg, kMercatorMaxLatDeg);
  }
  try {
    return lonlat_to_mercator({lon, lat});
  } catch (const ValidationError& e) {
    throw ValidationError("feature " + std::to_string(feature_index) + ": " + e.what());
  }
}

inline Ring parse_ring(const nlohmann::json& coords, std::size_t feature_index) {
  if (!coords.is_array()) {
    throw ValidationError("feature " + std::to_string(feature_index) +
                          ": ring is not an array");
  }
  Ring r;
  r.points.reserve(coords.size());
  for (const auto& pos : coords) {
    const MercatorXY p = parse_position(pos, feature_index);
    if (!r.points.empty() && r.points.back().x == p.x && r.points.back().y == p.y) {
      continue;
    }
    r.points.push_back(p);
  }
  while (r.points.size() > 1 && r.points.front().x == r.points.back().x &&
         r.points.front().y == r.points.back().y) {
    r.points.pop_back();
  }
  if (r.points.size() < 3) {
    throw ValidationError("feature " + std::to_string(feature_index) +
                          ": ring has fewer than 3 distinct points");
  }
  return r;
}

inline PolygonGeom parse_polygon(const nlohmann::json& coords, std::size_t feature_index) {
  if (!coords.is_array() || coords.empty()) {
    throw ValidationError("feature " + std::to_string(feature_index) +
                          ": polygon has no rings");
  }
  PolygonGeom p;
  p.exterior = parse_ring(coords[0], feature_index);
  ensure_ccw(p.exterior);
  for (std::size_t i = 1; i < coords.size(); ++i) {
    Ring h = parse_ring(coords[i], feature_index);
    ensure_cw(h);
    p.holes.push_back(std::move(h));
  }
  return p;
}

}  // namespace geojson_detail

// Writes one Feature per polygon with properties {source_tile, area_m2};
// coordinates are lon/lat with 7 decimal places. Output is byte-deterministic.
inline void write_polygons_geojson(const MultiPolygonGeom& mp,
                                   const std::filesystem::path& path,
                                   const std::vector<std::string>& source_tiles = {}) {
  std::string out;
  out += "{\"type\":\"FeatureCollection\",\"features\":[";
  bool first = true;
  for (std::size_t i = 0; i < mp.polygons.size(); ++i) {
    const PolygonGeom& p = mp.polygons[i];
    const auto exterior = geojson_detail::wire_ring(p.exterior);
    if (exterior.size() < 3) continue;  // thinner than the wire resolution
    if (!first) out += ',';
    first = false;
    out += "\n{\"type\":\"Feature\",\"properties\":{\"source_tile\":\"";
    if (i < source_tiles.size()) out += geojson_detail::escape_json(source_tiles[i]);
    out += "\",\"area_m2\":";
    out += geojson_detail::fmt_area(polygon_area_m2(p, correction_at(p)));
    out += "},\"geometry\":{\"type\":\"Polygon\",\"coordinates\":[";
    geojson_detail::append_ring(out, exterior);
    for (const Ring& h : p.holes) {
      const auto hole = geojson_detail::wire_ring(h);
      if (hole.size() < 3) continue;
      out += ',';
      geojson_detail::append_ring(out, hole);
    }
    out += "]}}";
  }
  out += first ? "]}" : "\n]}";
  out += '\n';

  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot create " + path.string());
  f << out;
  if (!f) throw IoError("write failed: " + path.string());
}

// Reads Polygon and MultiPolygon features; other geometry types are an error
// naming the feature index.
inline GeoJsonPolygons read_polygons_geojson(const std::filesystem::path& path) {
  const nlohmann::json doc = geojson_detail::parse_file(path);
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw ValidationError(path.string() + ": not a GeoJSON FeatureCollection");
  }
  GeoJsonPolygons out;
  const auto& features = doc["features"];
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& f = features[i];
    if (!f.is_object() || !f.contains("geometry") || f["geometry"].is_null()) {
      throw ValidationError("feature " + std::to_string(i) + ": missing geometry");
    }
    const auto& g = f["geometry"];
    const std::string type = g.value("type", "");
    std::string tile;
    if (f.contains("properties") && f["properties"].is_object()) {
      tile = f["properties"].value("source_tile", "");
    }
    if (type == "Polygon") {
      out.geometry.polygons.push_back(geojson_detail::parse_polygon(g["coordinates"], i));
      out.source_tiles.push_back(tile);
    } else if (type == "MultiPolygon") {
      for (const auto& poly : g["coordinates"]) {
        out.geometry.polygons.push_back(geojson_detail::parse_polygon(poly, i));
        out.source_tiles.push_back(tile);
      }
    } else {
      throw ValidationError("feature " + std::to_string(i) +
                            ": unsupported geometry type '" + type + "'");
    }
  }
  return out;
}

// Reads LineString features with an optional integer `lanes` property.
inline std::vector<RoadCenterline> read_roads_geojson(const std::filesystem::path& path) {
  const nlohmann::json doc = geojson_detail::parse_file(path);
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw ValidationError(path.string() + ": not a GeoJSON FeatureCollection");
  }
  std::vector<RoadCenterline> roads;
  const auto& features = doc["features"];
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& f = features[i];
    if (!f.is_object() || !f.contains("geometry") || f["geometry"].is_null()) {
      throw ValidationError("feature " + std::to_string(i) + ": missing geometry");
    }
    const auto& g = f["geometry"];
    if (g.value("type", "") != "LineString") {
      throw ValidationError("feature " + std::to_string(i) +
                            ": expected LineString, got '" + g.value("type", "") + "'");
    }
    RoadCenterline road;
    for (const auto& pos : g["coordinates"]) {
      const MercatorXY p = geojson_detail::parse_position(pos, i);
      if (!road.points.empty() && road.points.back().x == p.x &&
          road.points.back().y == p.y) {
        continue;
      }
      road.points.push_back(p);
    }
    if (road.points.size() < 2) {
      throw ValidationError("feature " + std::to_string(i) +
                            ": LineString needs at least 2 distinct points");
    }
    if (f.contains("properties") && f["properties"].is_object() &&
        f["properties"].contains("lanes") && !f["properties"]["lanes"].is_null()) {
      const auto& lanes = f["properties"]["lanes"];
      if (!lanes.is_number_integer() || lanes.get<int>() < 1) {
        throw ValidationError("feature " + std::to_string(i) +
                              ": lanes must be a positive integer");
      }
      road.lanes = lanes.get<int>();
    }
    roads.push_back(std::move(road));
  }
  return roads;
}

// Writes road centerlines as LineString features (fixture output).
inline void write_roads_geojson(const std::vector<RoadCenterline>& roads,
                                const std::filesystem::path& path) {
  std::string out;
  out += "{\"type\":\"FeatureCollection\",\"features\":[";
  for (std::size_t i = 0; i < roads.size(); ++i) {
    if (i) out += ',';
    out += "\n{\"type\":\"Feature\",\"properties\":{";
    if (roads[i].lanes) {
      out += "\"lanes\":" + std::to_string(*roads[i].lanes);
    }
    out += "},\"geometry\":{\"type\":\"LineString\",\"coordinates\":[";
    for (std::size_t j = 0; j < roads[i].points.size(); ++j) {
      const LonLat ll = mercator_to_lonlat(roads[i].points[j]);
      if (j) out += ',';
      out += '[';
      out += geojson_detail::fmt_coord(ll.lon);
      out += ',';
      out += geojson_detail::fmt_coord(ll.lat);
      out += ']';
    }
    out += "]}}";
  }
  out += roads.empty() ? "]}" : "\n]}";
  out += '\n';

  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot create " + path.string());
  f << out;
  if (!f) throw IoError("write failed: " + path.string());
}

}  // namespace lotpoly
