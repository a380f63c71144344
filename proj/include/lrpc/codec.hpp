#pragma once
// Reference transform codec: full-range YCbCr, edge-replicated padding to
// multiples of 16, per-block orthonormal 8x8 DCT, and midtread quantization
// with a per-channel step.
//
// Channel layout: latent channel c carries zigzag frequency z = c/3 of plane
// p = c%3 (0 = luma, 1 = Cb, 2 = Cr), so coarse information lives in the low
// channel indices and a channel-ordered prefix is a frequency-progressive
// refinement.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "lrpc/dct.hpp"
#include "lrpc/image.hpp"
#include "lrpc/latent.hpp"

namespace lrpc {

inline constexpr int kPlanes = 3;
inline constexpr int kLatentChannels = kPlanes * kBlockArea;  // 192
inline constexpr int kPadMultiple = 2 * kBlock;               // 16
inline constexpr int kMinImageSide = kPadMultiple;

struct QualityPreset {
  int id;                // stored in the base layer; 1..3
  const char* name;
  double delta_base;     // quantization step of the luma DC channel
  double lambda;         // rate-distortion weight used for reporting
};

// Steps tuned on the 768x512 synthetic corpus: roughly 0.18 / 0.26 / 0.35
// bits per pixel, spanning the low-rate band the toolkit targets. The 2x
// spacing also keeps every single-channel payload of a 288x224 image inside
// one 900-byte packet -- the flat layout's DC channel is the tightest case,
// since rearrangement dilutes it across a window of four -- which the
// packet-path tests rely on.
inline constexpr std::array<QualityPreset, 3> kPresets{{
    {1, "Q1", 120.0, 0.0018},
    {2, "Q2", 60.0, 0.0035},
    {3, "Q3", 30.0, 0.0067},
}};

inline const QualityPreset& preset_by_id(int id) {
  for (const auto& p : kPresets)
    if (p.id == id) return p;
  throw error("unknown quality preset id " + std::to_string(id));
}

inline const QualityPreset& preset_by_name(const std::string& name) {
  for (const auto& p : kPresets)
    if (name == p.name) return p;
  throw error("unknown quality preset '" + name + "' (use Q1, Q2 or Q3)");
}

inline int plane_of_channel(int c) { return c % kPlanes; }
inline int frequency_of_channel(int c) { return c / kPlanes; }
inline int channel_of(int plane, int z) { return kPlanes * z + plane; }

// Step grows linearly with frequency; chroma planes quantize 25% coarser.
inline double quant_step(const QualityPreset& preset, int channel) {
  const int z = frequency_of_channel(channel);
  const double plane_factor = plane_of_channel(channel) == 0 ? 1.0 : 1.25;
  return preset.delta_base * (1.0 + 0.25 * z) * plane_factor;
}

inline int round_up(int v, int multiple) {
  return (v + multiple - 1) / multiple * multiple;
}

namespace detail {

// Full-range (JFIF) RGB -> YCbCr, then a -128 shift on every plane so the
// block transform sees zero-centred data.
inline void rgb_to_planes(double r, double g, double b, double* y, double* cb,
                          double* cr) {
  *y = 0.299 * r + 0.587 * g + 0.114 * b - 128.0;
  *cb = -0.168736 * r - 0.331264 * g + 0.5 * b;   // +128 shift cancels
  *cr = 0.5 * r - 0.418688 * g - 0.081312 * b;
}

inline void planes_to_rgb(double y, double cb, double cr, double* r, double* g,
                          double* b) {
  const double yy = y + 128.0;
  *r = yy + 1.402 * cr;
  *g = yy - 0.344136 * cb - 0.714136 * cr;
  *b = yy + 1.772 * cb;
}

inline std::uint8_t to_pixel(double v) {
  const long q = std::lround(v);
  return static_cast<std::uint8_t>(std::clamp(q, 0L, 255L));
}

}  // namespace detail

inline std::int16_t quantize_value(double v, double step) {
  const long q = std::lround(v / step);
  return static_cast<std::int16_t>(
      std::clamp(q, static_cast<long>(kValueMin), static_cast<long>(kValueMax)));
}

// The padded colour planes the transform code works on. Kept public so
// quality can be measured in the same domain the quantizer acts in.
using PlaneSet = std::array<std::vector<double>, kPlanes>;

// Colour planes of an image, edge-replicated to a multiple of 16 per side.
inline PlaneSet image_planes(const ImageBuffer& img) {
  const int pad_w = round_up(img.width, kPadMultiple);
  const int pad_h = round_up(img.height, kPadMultiple);
  PlaneSet planes;
  for (auto& p : planes) p.resize(static_cast<std::size_t>(pad_w) * pad_h);
  for (int y = 0; y < pad_h; ++y) {
    const int sy = std::min(y, img.height - 1);
    for (int x = 0; x < pad_w; ++x) {
      const int sx = std::min(x, img.width - 1);
      const std::size_t i = static_cast<std::size_t>(y) * pad_w + x;
      detail::rgb_to_planes(img.at(sx, sy, 0), img.at(sx, sy, 1),
                            img.at(sx, sy, 2), &planes[0][i], &planes[1][i],
                            &planes[2][i]);
    }
  }
  return planes;
}

struct AnalysisResult {
  Latent latent;
  std::vector<double> mean_abs;  // per channel, over the quantized values
};

inline AnalysisResult analysis(const ImageBuffer& img,
                               const QualityPreset& preset) {
  if (img.width < kMinImageSide || img.height < kMinImageSide)
    throw error("image must be at least 16x16");
  const int pad_w = round_up(img.width, kPadMultiple);
  const int pad_h = round_up(img.height, kPadMultiple);
  const int lw = pad_w / kBlock;
  const int lh = pad_h / kBlock;

  const PlaneSet planes = image_planes(img);

  AnalysisResult out;
  out.latent = Latent(kLatentChannels, lh, lw);
  double block[kBlockArea], coef[kBlockArea];
  for (int p = 0; p < kPlanes; ++p) {
    const auto& plane = planes[p];
    for (int bi = 0; bi < lh; ++bi)
      for (int bj = 0; bj < lw; ++bj) {
        for (int u = 0; u < kBlock; ++u)
          for (int v = 0; v < kBlock; ++v)
            block[u * kBlock + v] =
                plane[static_cast<std::size_t>(bi * kBlock + u) * pad_w +
                      bj * kBlock + v];
        forward_dct_8x8(block, coef);
        for (int u = 0; u < kBlock; ++u)
          for (int v = 0; v < kBlock; ++v) {
            const int c = channel_of(p, zigzag_index(u, v));
            out.latent.at(c, bi, bj) =
                quantize_value(coef[u * kBlock + v], quant_step(preset, c));
          }
      }
  }

  out.mean_abs.assign(kLatentChannels, 0.0);
  const double inv_n = 1.0 / out.latent.plane_size();
  for (int c = 0; c < kLatentChannels; ++c) {
    const std::int16_t* row = out.latent.channel(c);
    double acc = 0.0;
    for (int i = 0; i < out.latent.plane_size(); ++i) acc += std::abs(row[i]);
    out.mean_abs[c] = acc * inv_n;
  }
  return out;
}

// Dequantized reconstruction in the working colour planes, still padded.
inline PlaneSet synthesis_planes(const Latent& latent,
                                 const QualityPreset& preset) {
  if (latent.channels != kLatentChannels)
    throw error("latent does not have the codec channel count");
  const int pad_w = latent.width * kBlock;
  PlaneSet planes;
  for (auto& p : planes)
    p.resize(static_cast<std::size_t>(pad_w) * latent.height * kBlock);
  double block[kBlockArea], coef[kBlockArea];
  for (int p = 0; p < kPlanes; ++p) {
    auto& plane = planes[p];
    for (int bi = 0; bi < latent.height; ++bi)
      for (int bj = 0; bj < latent.width; ++bj) {
        for (int u = 0; u < kBlock; ++u)
          for (int v = 0; v < kBlock; ++v) {
            const int c = channel_of(p, zigzag_index(u, v));
            coef[u * kBlock + v] =
                latent.at(c, bi, bj) * quant_step(preset, c);
          }
        inverse_dct_8x8(coef, block);
        for (int u = 0; u < kBlock; ++u)
          for (int v = 0; v < kBlock; ++v)
            plane[static_cast<std::size_t>(bi * kBlock + u) * pad_w +
                  bj * kBlock + v] = block[u * kBlock + v];
      }
  }
  return planes;
}

inline ImageBuffer synthesis(const Latent& latent, const QualityPreset& preset,
                             int out_width, int out_height) {
  const int pad_w = latent.width * kBlock;
  const int pad_h = latent.height * kBlock;
  if (round_up(out_width, kPadMultiple) != pad_w ||
      round_up(out_height, kPadMultiple) != pad_h)
    throw error("latent shape does not match requested image size");

  const PlaneSet planes = synthesis_planes(latent, preset);

  ImageBuffer img(out_width, out_height);
  for (int y = 0; y < out_height; ++y)
    for (int x = 0; x < out_width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * pad_w + x;
      double r, g, b;
      detail::planes_to_rgb(planes[0][i], planes[1][i], planes[2][i], &r, &g,
                            &b);
      img.at(x, y, 0) = detail::to_pixel(r);
      img.at(x, y, 1) = detail::to_pixel(g);
      img.at(x, y, 2) = detail::to_pixel(b);
    }
  return img;
}

}  // namespace lrpc
