#pragma once
// Quality and rate metrics.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "lrpc/image.hpp"

namespace lrpc {

// PSNR is reported as this value when the images are identical.
inline constexpr double kPsnrCap = 99.0;

inline double mse(const ImageBuffer& a, const ImageBuffer& b) {
  if (!a.same_shape(b)) throw error("mse: image shapes differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rgb.size(); ++i) {
    const double d =
        static_cast<double>(a.rgb[i]) - static_cast<double>(b.rgb[i]);
    acc += d * d;
  }
  return acc / static_cast<double>(a.rgb.size());
}

inline double psnr_from_mse(double m) {
  if (m <= 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(255.0 * 255.0 / m));
}

inline double psnr(const ImageBuffer& a, const ImageBuffer& b) {
  return psnr_from_mse(mse(a, b));
}

inline double bits_per_pixel(std::size_t total_bytes, int width, int height) {
  return static_cast<double>(total_bytes) * 8.0 /
         (static_cast<double>(width) * height);
}

// Lagrangian rate-distortion cost used for reporting: rate in bits per
// pixel plus lambda times the mean squared error.
inline double rd_cost(double bpp, double mean_sq_err, double lambda) {
  return bpp + lambda * mean_sq_err;
}

}  // namespace lrpc
