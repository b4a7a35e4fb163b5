#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lotpoly/error.hpp"
#include "lotpoly/geo.hpp"

namespace lotpoly {

// Single 8-bit band, row-major.
class BandGrid {
public:
  BandGrid() = default;
  BandGrid(int width, int height, std::uint8_t fill = 0)
      : width_(width), height_(height) {
    if (width < 1 || height < 1) throw ValidationError("BandGrid dimensions must be >= 1");
    values_.assign(static_cast<std::size_t>(width) * height, fill);
  }
  BandGrid(int width, int height, std::vector<std::uint8_t> values)
      : width_(width), height_(height), values_(std::move(values)) {
    if (width < 1 || height < 1) throw ValidationError("BandGrid dimensions must be >= 1");
    if (values_.size() != static_cast<std::size_t>(width) * height) {
      throw ValidationError("BandGrid value count does not match dimensions");
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::uint8_t at(int x, int y) const { return values_[idx(x, y)]; }
  void set(int x, int y, std::uint8_t v) { values_[idx(x, y)] = v; }
  const std::vector<std::uint8_t>& values() const { return values_; }
  std::vector<std::uint8_t>& values() { return values_; }

  bool operator==(const BandGrid&) const = default;

private:
  std::size_t idx(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> values_;
};

// 3-band RGB or 4-band RGB+NIR image. All bands share one size.
class MultiBandImage {
public:
  MultiBandImage() = default;
  explicit MultiBandImage(std::vector<BandGrid> bands) : bands_(std::move(bands)) {
    if (bands_.size() != 3 && bands_.size() != 4) {
      throw ValidationError("MultiBandImage requires 3 or 4 bands");
    }
    for (const BandGrid& b : bands_) {
      if (b.width() != bands_[0].width() || b.height() != bands_[0].height()) {
        throw ValidationError("MultiBandImage bands differ in size");
      }
    }
  }

  int width() const { return bands_[0].width(); }
  int height() const { return bands_[0].height(); }
  int band_count() const { return static_cast<int>(bands_.size()); }
  const BandGrid& band(int i) const { return bands_.at(i); }
  const std::vector<BandGrid>& bands() const { return bands_; }

private:
  std::vector<BandGrid> bands_;
};

// {0,1} mask tile.
class BinaryMask {
public:
  BinaryMask() = default;
  BinaryMask(int width, int height, std::uint8_t fill = 0)
      : width_(width), height_(height) {
    if (width < 1 || height < 1) throw ValidationError("BinaryMask dimensions must be >= 1");
    if (fill > 1) throw ValidationError("BinaryMask values must be 0 or 1");
    values_.assign(static_cast<std::size_t>(width) * height, fill);
  }
  BinaryMask(int width, int height, std::vector<std::uint8_t> values)
      : width_(width), height_(height), values_(std::move(values)) {
    if (width < 1 || height < 1) throw ValidationError("BinaryMask dimensions must be >= 1");
    if (values_.size() != static_cast<std::size_t>(width) * height) {
      throw ValidationError("BinaryMask value count does not match dimensions");
    }
    for (std::uint8_t v : values_) {
      if (v > 1) throw ValidationError("BinaryMask values must be 0 or 1");
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::uint8_t at(int x, int y) const { return values_[idx(x, y)]; }
  void set(int x, int y, bool v) { values_[idx(x, y)] = v ? 1 : 0; }
  const std::vector<std::uint8_t>& values() const { return values_; }

  std::size_t count_ones() const {
    std::size_t n = 0;
    for (std::uint8_t v : values_) n += v;
    return n;
  }

  bool operator==(const BinaryMask&) const = default;

private:
  std::size_t idx(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> values_;
};

// Bilinear blend of the four pixel centers around (x, y). Coordinates address
// pixel centers: (0,0) is the center of the top-left pixel.
inline double bilinear_sample(const BandGrid& g, double x, double y) {
  if (!(x >= 0.0) || !(x <= g.width() - 1.0) || !(y >= 0.0) || !(y <= g.height() - 1.0)) {
    throw ValidationError("bilinear_sample coordinate outside grid");
  }
  const int x0 = std::min(static_cast<int>(x), std::max(g.width() - 2, 0));
  const int y0 = std::min(static_cast<int>(y), std::max(g.height() - 2, 0));
  const int x1 = std::min(x0 + 1, g.width() - 1);
  const int y1 = std::min(y0 + 1, g.height() - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = g.at(x0, y0) * (1.0 - fx) + g.at(x1, y0) * fx;
  const double bot = g.at(x0, y1) * (1.0 - fx) + g.at(x1, y1) * fx;
  return top * (1.0 - fy) + bot * fy;
}

inline std::uint8_t quantize_round_half_up(double v) {
  const double r = std::floor(v + 0.5);
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

// Resample src onto the destination grid. Each destination pixel center is
// mapped to world space, then to a fractional source pixel; locations outside
// the source extent clamp to the nearest edge sample.
inline BandGrid resample_to_grid(const BandGrid& src, const GeoTransform& src_t,
                                 const GeoTransform& dst_t, int dst_w, int dst_h) {
  if (src.width() < 1 || src.height() < 1) throw ValidationError("empty source grid");
  if (dst_w < 1 || dst_h < 1) throw ValidationError("empty destination grid");
  BandGrid out(dst_w, dst_h);
  const double max_x = src.width() - 1.0;
  const double max_y = src.height() - 1.0;
  for (int r = 0; r < dst_h; ++r) {
    for (int c = 0; c < dst_w; ++c) {
      const MercatorXY w = pixel_to_world(dst_t, c + 0.5, r + 0.5);
      const PixelCoord p = world_to_pixel(src_t, w);
      // Corner-based fractional pixel to center-based sample coordinate.
      const double sx = std::clamp(p.col - 0.5, 0.0, max_x);
      const double sy = std::clamp(p.row - 0.5, 0.0, max_y);
      out.set(c, r, quantize_round_half_up(bilinear_sample(src, sx, sy)));
    }
  }
  return out;
}

// Attach a resampled NIR band to an RGB image. RGB bytes pass through
// untouched; band order is R,G,B,NIR.
inline MultiBandImage fuse_nir(const MultiBandImage& rgb, const BandGrid& nir) {
  if (rgb.band_count() != 3) throw ValidationError("fuse_nir expects a 3-band image");
  if (nir.width() != rgb.width() || nir.height() != rgb.height()) {
    throw ValidationError("fuse_nir dimension mismatch: rgb " + std::to_string(rgb.width()) +
                          "x" + std::to_string(rgb.height()) + ", nir " +
                          std::to_string(nir.width()) + "x" + std::to_string(nir.height()));
  }
  std::vector<BandGrid> bands = rgb.bands();
  bands.push_back(nir);
  return MultiBandImage(std::move(bands));
}

}  // namespace lotpoly
