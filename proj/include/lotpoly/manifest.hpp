#pragma once

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lotpoly/error.hpp"
#include "lotpoly/geo.hpp"

namespace lotpoly {

struct TileRecord {
  std::string id;
  TileBounds bounds;
  std::filesystem::path image_path;
};

// Parses `<id>_<minx>_<miny>_<maxx>_<maxy>` from a filename stem. The id may
// itself contain underscores; bounds are the last four tokens.
inline std::optional<TileRecord> parse_tile_stem(const std::string& stem) {
  std::vector<std::size_t> seps;
  for (std::size_t i = 0; i < stem.size(); ++i) {
    if (stem[i] == '_') seps.push_back(i);
  }
  if (seps.size() < 4) return std::nullopt;

  const std::size_t id_end = seps[seps.size() - 4];
  if (id_end == 0) return std::nullopt;

  double nums[4];
  std::size_t start = id_end + 1;
  for (int k = 0; k < 4; ++k) {
    const std::size_t end = k < 3 ? seps[seps.size() - 3 + k] : stem.size();
    if (end <= start) return std::nullopt;
    const std::string token = stem.substr(start, end - start);
    char* parse_end = nullptr;
    nums[k] = std::strtod(token.c_str(), &parse_end);
    if (parse_end != token.c_str() + token.size()) return std::nullopt;
    start = end + 1;
  }
  TileRecord rec;
  rec.id = stem.substr(0, id_end);
  rec.bounds = {nums[0], nums[1], nums[2], nums[3]};
  if (!(rec.bounds.min_x < rec.bounds.max_x) || !(rec.bounds.min_y < rec.bounds.max_y)) {
    return std::nullopt;
  }
  return rec;
}

// Scans a directory of PNG tiles named `<id>_<minx>_<miny>_<maxx>_<maxy>.png`
// (meters, Mercator). Unparsable names are skipped with a warning; duplicate
// ids are an error. Records come back sorted by id.
inline std::vector<TileRecord> build_manifest(const std::filesystem::path& dir,
                                              std::vector<std::string>* warnings = nullptr) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("not a directory: " + dir.string());
  }
  std::vector<TileRecord> records;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
    std::optional<TileRecord> rec = parse_tile_stem(entry.path().stem().string());
    if (!rec) {
      if (warnings) {
        warnings->push_back("skipped unparsable tile filename: " +
                            entry.path().filename().string());
      }
      continue;
    }
    rec->image_path = entry.path();
    records.push_back(std::move(*rec));
  }
  std::sort(records.begin(), records.end(),
            [](const TileRecord& a, const TileRecord& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].id == records[i - 1].id) {
      throw ValidationError("duplicate tile id in manifest: " + records[i].id);
    }
  }
  return records;
}

// The canonical tile filename for the given record.
inline std::string tile_filename(const std::string& id, const TileBounds& b) {
  const auto fmt = [](double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    std::string s(buf);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  };
  return id + "_" + fmt(b.min_x) + "_" + fmt(b.min_y) + "_" + fmt(b.max_x) + "_" +
         fmt(b.max_y) + ".png";
}

}  // namespace lotpoly
