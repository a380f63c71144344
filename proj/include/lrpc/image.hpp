#pragma once
// 8-bit RGB image buffer with PPM (P6) and PNG file I/O.

#include <png.h>

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "lrpc/common.hpp"

namespace lrpc {

struct ImageBuffer {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // interleaved, row-major

  ImageBuffer() = default;
  ImageBuffer(int w, int h)
      : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0) {}

  std::uint8_t& at(int x, int y, int ch) {
    return rgb[(static_cast<std::size_t>(y) * width + x) * 3 + ch];
  }
  std::uint8_t at(int x, int y, int ch) const {
    return rgb[(static_cast<std::size_t>(y) * width + x) * 3 + ch];
  }

  bool same_shape(const ImageBuffer& o) const {
    return width == o.width && height == o.height;
  }
};

namespace detail {

struct file_closer {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};

inline int ppm_token(std::FILE* f) {
  // Next integer token, skipping whitespace and '#' comments.
  int c = std::fgetc(f);
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = std::fgetc(f);
    } else if (std::isspace(c)) {
      c = std::fgetc(f);
    } else {
      break;
    }
  }
  if (c == EOF || !std::isdigit(c)) throw parse_error("bad ppm header");
  int value = 0;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    if (value > 1 << 28) throw parse_error("ppm header value out of range");
    c = std::fgetc(f);
  }
  return value;
}

}  // namespace detail

inline ImageBuffer load_ppm(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw error("cannot open " + path);
  std::unique_ptr<std::FILE, detail::file_closer> guard(f);
  if (std::fgetc(f) != 'P' || std::fgetc(f) != '6')
    throw parse_error(path + ": not a P6 ppm");
  const int w = detail::ppm_token(f);
  const int h = detail::ppm_token(f);
  const int maxval = detail::ppm_token(f);
  if (w <= 0 || h <= 0 || maxval != 255)
    throw parse_error(path + ": unsupported ppm geometry");
  ImageBuffer img(w, h);
  if (std::fread(img.rgb.data(), 1, img.rgb.size(), f) != img.rgb.size())
    throw parse_error(path + ": truncated ppm data");
  return img;
}

inline void save_ppm(const ImageBuffer& img, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw error("cannot open " + path + " for writing");
  std::unique_ptr<std::FILE, detail::file_closer> guard(f);
  std::fprintf(f, "P6\n%d %d\n255\n", img.width, img.height);
  if (std::fwrite(img.rgb.data(), 1, img.rgb.size(), f) != img.rgb.size())
    throw error("short write to " + path);
}

inline ImageBuffer load_png(const std::string& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str()))
    throw parse_error(path + ": " + png.message);
  png.format = PNG_FORMAT_RGB;
  ImageBuffer img(static_cast<int>(png.width), static_cast<int>(png.height));
  if (!png_image_finish_read(&png, nullptr, img.rgb.data(), 0, nullptr)) {
    std::string msg = png.message;
    png_image_free(&png);
    throw parse_error(path + ": " + msg);
  }
  return img;
}

inline void save_png(const ImageBuffer& img, const std::string& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(img.width);
  png.height = static_cast<png_uint_32>(img.height);
  png.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png, path.c_str(), 0, img.rgb.data(), 0,
                               nullptr))
    throw error(path + ": " + png.message);
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline ImageBuffer load_image(const std::string& path) {
  if (ends_with(path, ".ppm")) return load_ppm(path);
  if (ends_with(path, ".png")) return load_png(path);
  throw error(path + ": unsupported image extension (use .ppm or .png)");
}

inline void save_image(const ImageBuffer& img, const std::string& path) {
  if (ends_with(path, ".ppm")) return save_ppm(img, path);
  if (ends_with(path, ".png")) return save_png(img, path);
  throw error(path + ": unsupported image extension (use .ppm or .png)");
}

}  // namespace lrpc
