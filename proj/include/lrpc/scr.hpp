#pragma once
// Spatial-channel rearrangement.
//
// Each window of four consecutive channels ("quad") is repacked so that the
// four values sharing one spatial position become a 2x2 cell of a single
// output channel. Losing one rearranged channel then costs every member of
// the quad a quarter of its samples instead of wiping one channel out.
//
// Frozen mapping for quad g (channels 4g..4g+3), N = h*w, Nq = N/4:
//   source position n = i*w + j (raster order) goes to
//     output channel 4g + n/Nq,
//     cell m = n % Nq with top-left (2*(m/(w/2)), 2*(m%(w/2))),
//     quad member q at cell offset (q/2, q%2).
// Requires even h and w. Channels past the last full quad copy through.

#include <cstdint>

#include "lrpc/latent.hpp"

namespace lrpc {

namespace detail {

inline void check_scr_shape(const Latent& x) {
  if (x.height % 2 != 0 || x.width % 2 != 0)
    throw error("rearrangement requires even latent dimensions");
}

}  // namespace detail

inline Latent scr_forward(const Latent& x) {
  detail::check_scr_shape(x);
  Latent out(x.channels, x.height, x.width);
  const int n_total = x.plane_size();
  const int nq = n_total / 4;
  const int w2 = x.width / 2;
  for (int g = 0; g < full_quad_count(x.channels); ++g) {
    const std::int16_t* src[kQuadSize];
    for (int q = 0; q < kQuadSize; ++q) src[q] = x.channel(kQuadSize * g + q);
    for (int n = 0; n < n_total; ++n) {
      const int dst_c = kQuadSize * g + n / nq;
      const int m = n % nq;
      const int r0 = 2 * (m / w2);
      const int c0 = 2 * (m % w2);
      for (int q = 0; q < kQuadSize; ++q)
        out.at(dst_c, r0 + q / 2, c0 + q % 2) = src[q][n];
    }
  }
  for (int c = kQuadSize * full_quad_count(x.channels); c < x.channels; ++c) {
    const std::int16_t* src = x.channel(c);
    std::int16_t* dst = out.channel(c);
    for (int n = 0; n < n_total; ++n) dst[n] = src[n];
  }
  return out;
}

inline Latent scr_inverse(const Latent& y) {
  detail::check_scr_shape(y);
  Latent out(y.channels, y.height, y.width);
  const int n_total = y.plane_size();
  const int nq = n_total / 4;
  const int w2 = y.width / 2;
  for (int g = 0; g < full_quad_count(y.channels); ++g) {
    std::int16_t* dst[kQuadSize];
    for (int q = 0; q < kQuadSize; ++q) dst[q] = out.channel(kQuadSize * g + q);
    for (int n = 0; n < n_total; ++n) {
      const int src_c = kQuadSize * g + n / nq;
      const int m = n % nq;
      const int r0 = 2 * (m / w2);
      const int c0 = 2 * (m % w2);
      for (int q = 0; q < kQuadSize; ++q)
        dst[q][n] = y.at(src_c, r0 + q / 2, c0 + q % 2);
    }
  }
  for (int c = kQuadSize * full_quad_count(y.channels); c < y.channels; ++c) {
    const std::int16_t* src = y.channel(c);
    std::int16_t* dst = out.channel(c);
    for (int n = 0; n < n_total; ++n) dst[n] = src[n];
  }
  return out;
}

// Element-level visibility in the original channel order given which
// rearranged channels survived. A missing rearranged channel 4g+s blanks the
// positions n in [s*N/4, (s+1)*N/4) of all four members of quad g; a missing
// passthrough channel blanks itself entirely.
inline ElementMask mask_inverse(const ChannelMask& mask, int height,
                                int width) {
  if (height % 2 != 0 || width % 2 != 0)
    throw error("rearrangement requires even latent dimensions");
  const int channels = mask.channels();
  ElementMask out(channels, height, width, true);
  const int n_total = height * width;
  const int nq = n_total / 4;
  const int quads = full_quad_count(channels);
  for (int c = 0; c < channels; ++c) {
    if (mask.received(c)) continue;
    if (c < kQuadSize * quads) {
      const int g = c / kQuadSize;
      const int s = c % kQuadSize;
      for (int q = 0; q < kQuadSize; ++q) {
        std::uint8_t* row = out.channel(kQuadSize * g + q);
        for (int n = s * nq; n < (s + 1) * nq; ++n) row[n] = 0;
      }
    } else {
      std::uint8_t* row = out.channel(c);
      for (int n = 0; n < n_total; ++n) row[n] = 0;
    }
  }
  return out;
}

// Zeroes the channels the mask marks as missing; the rest copy through.
inline Latent apply_channel_mask(const Latent& x, const ChannelMask& mask) {
  if (mask.channels() != x.channels)
    throw error("channel mask does not match latent");
  Latent out = x;
  for (int c = 0; c < x.channels; ++c) {
    if (mask.received(c)) continue;
    std::int16_t* row = out.channel(c);
    for (int n = 0; n < x.plane_size(); ++n) row[n] = 0;
  }
  return out;
}

}  // namespace lrpc
