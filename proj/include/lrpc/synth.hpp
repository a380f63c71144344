#pragma once
// Deterministic synthetic test images: smooth gradients, soft blobs,
// oriented sinusoid texture, a few hard-edged shapes, low-frequency noise
// and light grain. Content depends only on (index, width, height), so any
// machine regenerates byte-identical corpora.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "lrpc/common.hpp"
#include "lrpc/image.hpp"

namespace lrpc {

namespace detail {

// Separable box blur, two passes per axis, radius r.
inline void box_blur(std::vector<double>& v, int w, int h, int r) {
  std::vector<double> tmp(v.size());
  for (int pass = 0; pass < 2; ++pass) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int d = -r; d <= r; ++d)
          acc += v[y * w + std::clamp(x + d, 0, w - 1)];
        tmp[y * w + x] = acc / (2 * r + 1);
      }
    for (int x = 0; x < w; ++x)
      for (int y = 0; y < h; ++y) {
        double acc = 0.0;
        for (int d = -r; d <= r; ++d)
          acc += tmp[std::clamp(y + d, 0, h - 1) * w + x];
        v[y * w + x] = acc / (2 * r + 1);
      }
  }
}

}  // namespace detail

inline ImageBuffer make_test_image(int index, int width = 768,
                                   int height = 512) {
  std::mt19937_64 rng(0x5EED0000ull + static_cast<std::uint64_t>(index));
  auto uni = [&](double lo, double hi) {
    return lo + (hi - lo) * rand_unit(rng);
  };

  std::vector<double> ch[3];
  for (auto& c : ch) c.assign(static_cast<std::size_t>(width) * height, 0.0);

  // Corner-anchored bilinear gradient background. The top-to-bottom contrast
  // is compressed by the aspect ratio so per-pixel slopes are direction-free
  // even on landscape frames.
  double corner[4][3];
  for (auto& c : corner)
    for (double& v : c) v = uni(30.0, 220.0);
  const double aspect = static_cast<double>(height) / width;
  for (int k = 0; k < 3; ++k) {
    corner[2][k] = corner[0][k] + aspect * (corner[2][k] - corner[0][k]);
    corner[3][k] = corner[1][k] + aspect * (corner[3][k] - corner[1][k]);
  }
  for (int y = 0; y < height; ++y) {
    const double fy = static_cast<double>(y) / (height - 1);
    for (int x = 0; x < width; ++x) {
      const double fx = static_cast<double>(x) / (width - 1);
      for (int k = 0; k < 3; ++k)
        ch[k][y * width + x] = (1 - fy) * ((1 - fx) * corner[0][k] + fx * corner[1][k]) +
                               fy * ((1 - fx) * corner[2][k] + fx * corner[3][k]);
    }
  }

  // Soft Gaussian blobs.
  const int blobs = 4 + index % 5;
  for (int b = 0; b < blobs; ++b) {
    const double cx = uni(0.0, width);
    const double cy = uni(0.0, height);
    const double sigma = uni(25.0, 140.0);
    double amp[3];
    for (double& a : amp) a = uni(-70.0, 70.0);
    const int x0 = std::max(0, static_cast<int>(cx - 3 * sigma));
    const int x1 = std::min(width - 1, static_cast<int>(cx + 3 * sigma));
    const int y0 = std::max(0, static_cast<int>(cy - 3 * sigma));
    const int y1 = std::min(height - 1, static_cast<int>(cy + 3 * sigma));
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) {
        const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        const double g = std::exp(-d2 / (2 * sigma * sigma));
        for (int k = 0; k < 3; ++k) ch[k][y * width + x] += amp[k] * g;
      }
  }

  // Crossed sinusoid pair (a woven texture), mostly luminance. The two
  // components share one amplitude and wavelength at right angles, so each
  // image contributes the same energy along x and y no matter the draw.
  {
    const double wavelength = uni(36.0, 160.0);
    const double angle = std::numbers::pi * (0.5 + index % 8) / 8.0;
    const double amp = uni(8.0, 22.0) / std::numbers::sqrt2;
    const double kx = std::cos(angle) * 2 * std::numbers::pi / wavelength;
    const double ky = std::sin(angle) * 2 * std::numbers::pi / wavelength;
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        const double s = amp * (std::sin(kx * x + ky * y) +
                                std::sin(-ky * x + kx * y));
        ch[0][y * width + x] += s;
        ch[1][y * width + x] += s;
        ch[2][y * width + x] += 0.6 * s;
      }
  }

  // Hard-edged shapes: rectangles and disks. Rectangles alternate between
  // axis-aligned and tilted, mixing the axis-dominant edge statistics of
  // built scenes with oblique orientations.
  const int shapes = 2 + index % 4;
  for (int s = 0; s < shapes; ++s) {
    double color[3];
    for (double& v : color) v = uni(20.0, 235.0);
    const double alpha = uni(0.55, 0.9);
    if (s % 2 == 0) {
      const double cx = uni(width * 0.1, width * 0.9);
      const double cy = uni(height * 0.1, height * 0.9);
      const double cap = 0.22 * std::min(width, height);
      const double hw = uni(30.0, cap);
      const double hh = uni(30.0, cap);
      const double tilt = uni(0.08, std::numbers::pi / 2 - 0.08);
      const double theta = (s + index) % 4 < 2 ? 0.0 : tilt;
      const double ct = std::cos(theta), st = std::sin(theta);
      const double reach = std::hypot(hw, hh);
      const int x0 = std::max(0, static_cast<int>(cx - reach));
      const int x1 = std::min(width - 1, static_cast<int>(cx + reach));
      const int y0 = std::max(0, static_cast<int>(cy - reach));
      const int y1 = std::min(height - 1, static_cast<int>(cy + reach));
      for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
          const double u = ct * (x - cx) + st * (y - cy);
          const double v = -st * (x - cx) + ct * (y - cy);
          if (std::abs(u) <= hw && std::abs(v) <= hh)
            for (int k = 0; k < 3; ++k)
              ch[k][y * width + x] =
                  (1 - alpha) * ch[k][y * width + x] + alpha * color[k];
        }
    } else {
      const double cx = uni(0.0, width);
      const double cy = uni(0.0, height);
      const double rad = uni(30.0, 130.0);
      const int x0 = std::max(0, static_cast<int>(cx - rad));
      const int x1 = std::min(width - 1, static_cast<int>(cx + rad));
      const int y0 = std::max(0, static_cast<int>(cy - rad));
      const int y1 = std::min(height - 1, static_cast<int>(cy + rad));
      for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
          if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= rad * rad)
            for (int k = 0; k < 3; ++k)
              ch[k][y * width + x] =
                  (1 - alpha) * ch[k][y * width + x] + alpha * color[k];
    }
  }

  // Smooth (blurred) noise field plus light pixel grain.
  {
    const double amp = uni(6.0, 14.0);
    std::vector<double> noise(static_cast<std::size_t>(width) * height);
    for (double& v : noise) v = uni(-amp, amp);
    detail::box_blur(noise, width, height, 3);
    for (std::size_t i = 0; i < noise.size(); ++i) {
      ch[0][i] += 3.0 * noise[i];
      ch[1][i] += 3.0 * noise[i];
      ch[2][i] += 2.0 * noise[i];
    }
    for (std::size_t i = 0; i < noise.size(); ++i) {
      const double g = uni(-2.0, 2.0);
      for (int k = 0; k < 3; ++k) ch[k][i] += g;
    }
  }

  ImageBuffer img(width, height);
  for (std::size_t i = 0; i < ch[0].size(); ++i)
    for (int k = 0; k < 3; ++k)
      img.rgb[i * 3 + k] = static_cast<std::uint8_t>(
          std::clamp(std::lround(ch[k][i]), 0L, 255L));
  return img;
}

}  // namespace lrpc
