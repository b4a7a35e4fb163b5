#pragma once

#include <png.h>

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "lotpoly/error.hpp"
#include "lotpoly/raster.hpp"

namespace lotpoly {

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngReadState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadState() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWriteState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriteState() { png_destroy_write_struct(&png, &info); }
};

// Decodes an 8-bit PNG; returns interleaved rows plus channel count.
inline void read_png_raw(const std::filesystem::path& path, int& width, int& height,
                         int& channels, std::vector<std::uint8_t>& data) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) throw IoError("cannot open " + path.string());

  unsigned char header[8];
  if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8)) {
    throw IoError("not a PNG file: " + path.string());
  }

  PngReadState s;
  s.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!s.png) throw IoError("png_create_read_struct failed");
  s.info = png_create_info_struct(s.png);
  if (!s.info) throw IoError("png_create_info_struct failed");
  if (setjmp(png_jmpbuf(s.png))) {
    throw IoError("PNG decode failed (truncated or corrupt): " + path.string());
  }
  png_init_io(s.png, fp.get());
  png_set_sig_bytes(s.png, 8);
  png_read_info(s.png, s.info);

  width = static_cast<int>(png_get_image_width(s.png, s.info));
  height = static_cast<int>(png_get_image_height(s.png, s.info));
  const int bit_depth = png_get_bit_depth(s.png, s.info);
  const int color_type = png_get_color_type(s.png, s.info);

  if (bit_depth == 16) png_set_strip_16(s.png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(s.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(s.png);
  }
  png_read_update_info(s.png, s.info);

  channels = png_get_channels(s.png, s.info);
  const std::size_t row_bytes = png_get_rowbytes(s.png, s.info);
  data.resize(row_bytes * height);
  std::vector<png_bytep> rows(height);
  for (int r = 0; r < height; ++r) rows[r] = data.data() + row_bytes * r;
  png_read_image(s.png, rows.data());
  png_read_end(s.png, nullptr);
}

inline void write_png_raw(const std::filesystem::path& path, int width, int height,
                          int channels, const std::vector<std::uint8_t>& data) {
  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) throw IoError("cannot create " + path.string());

  PngWriteState s;
  s.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!s.png) throw IoError("png_create_write_struct failed");
  s.info = png_create_info_struct(s.png);
  if (!s.info) throw IoError("png_create_info_struct failed");
  if (setjmp(png_jmpbuf(s.png))) {
    throw IoError("PNG encode failed: " + path.string());
  }
  png_init_io(s.png, fp.get());

  int color_type = PNG_COLOR_TYPE_GRAY;
  if (channels == 3) color_type = PNG_COLOR_TYPE_RGB;
  if (channels == 4) color_type = PNG_COLOR_TYPE_RGBA;
  png_set_IHDR(s.png, s.info, width, height, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(s.png, s.info);

  const std::size_t row_bytes = static_cast<std::size_t>(width) * channels;
  std::vector<png_bytep> rows(height);
  for (int r = 0; r < height; ++r) {
    rows[r] = const_cast<png_bytep>(data.data() + row_bytes * r);
  }
  png_write_image(s.png, rows.data());
  png_write_end(s.png, nullptr);
}

}  // namespace detail

// Reads a single-channel 8-bit PNG as a {0,1} mask. Accepts {0,255} data,
// mapping 255 to 1; any other pixel value is a format error.
inline BinaryMask read_mask_png(const std::filesystem::path& path) {
  int w = 0, h = 0, channels = 0;
  std::vector<std::uint8_t> data;
  detail::read_png_raw(path, w, h, channels, data);
  if (channels != 1) {
    throw ValidationError("mask PNG must be single-channel: " + path.string() + " has " +
                          std::to_string(channels));
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i] == 255) {
      data[i] = 1;
    } else if (data[i] > 1) {
      throw ValidationError("mask PNG has pixel value " + std::to_string(data[i]) +
                            " (expected 0, 1, or 255): " + path.string());
    }
  }
  return BinaryMask(w, h, std::move(data));
}

inline void write_mask_png(const BinaryMask& mask, const std::filesystem::path& path) {
  detail::write_png_raw(path, mask.width(), mask.height(), 1, mask.values());
}

// Reads a 3- or 4-channel PNG as a MultiBandImage (band 4 holds NIR when
// present, stored in the RGBA alpha slot on disk).
inline MultiBandImage read_image_png(const std::filesystem::path& path) {
  int w = 0, h = 0, channels = 0;
  std::vector<std::uint8_t> data;
  detail::read_png_raw(path, w, h, channels, data);
  if (channels != 3 && channels != 4) {
    throw ValidationError("image PNG must have 3 or 4 channels: " + path.string());
  }
  std::vector<BandGrid> bands;
  bands.reserve(channels);
  for (int b = 0; b < channels; ++b) {
    std::vector<std::uint8_t> v(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = data[i * channels + b];
    bands.emplace_back(w, h, std::move(v));
  }
  return MultiBandImage(std::move(bands));
}

inline void write_image_png(const MultiBandImage& img, const std::filesystem::path& path) {
  const int channels = img.band_count();
  const std::size_t n = static_cast<std::size_t>(img.width()) * img.height();
  std::vector<std::uint8_t> data(n * channels);
  for (int b = 0; b < channels; ++b) {
    const std::vector<std::uint8_t>& v = img.band(b).values();
    for (std::size_t i = 0; i < n; ++i) data[i * channels + b] = v[i];
  }
  detail::write_png_raw(path, img.width(), img.height(), channels, data);
}

// Reads a single-channel PNG as raw 8-bit samples (NIR source tiles).
inline BandGrid read_band_png(const std::filesystem::path& path) {
  int w = 0, h = 0, channels = 0;
  std::vector<std::uint8_t> data;
  detail::read_png_raw(path, w, h, channels, data);
  if (channels != 1) {
    throw ValidationError("band PNG must be single-channel: " + path.string());
  }
  return BandGrid(w, h, std::move(data));
}

inline void write_band_png(const BandGrid& band, const std::filesystem::path& path) {
  detail::write_png_raw(path, band.width(), band.height(), 1, band.values());
}

}  // namespace lotpoly
