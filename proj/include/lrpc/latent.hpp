#pragma once
// Latent coefficient grid plus the channel- and element-level masks that
// track what a receiver actually holds.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lrpc/common.hpp"

namespace lrpc {

// Quantized coefficients saturate to this symmetric range.
inline constexpr int kValueMin = -255;
inline constexpr int kValueMax = 255;

// The rearrangement operates on windows of four consecutive channels.
inline constexpr int kQuadSize = 4;

// C x h x w grid of quantized integers, channel-major, rows then columns.
struct Latent {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<std::int16_t> values;

  Latent() = default;
  Latent(int c, int h, int w)
      : channels(c),
        height(h),
        width(w),
        values(static_cast<std::size_t>(c) * h * w, 0) {}

  int plane_size() const { return height * width; }

  std::int16_t& at(int c, int i, int j) {
    return values[(static_cast<std::size_t>(c) * height + i) * width + j];
  }
  std::int16_t at(int c, int i, int j) const {
    return values[(static_cast<std::size_t>(c) * height + i) * width + j];
  }

  std::int16_t* channel(int c) {
    return values.data() + static_cast<std::size_t>(c) * plane_size();
  }
  const std::int16_t* channel(int c) const {
    return values.data() + static_cast<std::size_t>(c) * plane_size();
  }

  bool same_shape(const Latent& o) const {
    return channels == o.channels && height == o.height && width == o.width;
  }
};

// One flag per channel; bits[c] != 0 means channel c is present.
struct ChannelMask {
  std::vector<std::uint8_t> bits;

  ChannelMask() = default;
  explicit ChannelMask(int channels, bool present = true)
      : bits(channels, present ? 1 : 0) {}

  int channels() const { return static_cast<int>(bits.size()); }
  bool received(int c) const { return bits[c] != 0; }
  void set(int c, bool present) { bits[c] = present ? 1 : 0; }

  int count_received() const {
    int n = 0;
    for (auto b : bits) n += b ? 1 : 0;
    return n;
  }
};

// One flag per coefficient, same shape as its Latent.
struct ElementMask {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> known;

  ElementMask() = default;
  ElementMask(int c, int h, int w, bool value = true)
      : channels(c),
        height(h),
        width(w),
        known(static_cast<std::size_t>(c) * h * w, value ? 1 : 0) {}

  int plane_size() const { return height * width; }

  bool at(int c, int i, int j) const {
    return known[(static_cast<std::size_t>(c) * height + i) * width + j] != 0;
  }
  void set(int c, int i, int j, bool value) {
    known[(static_cast<std::size_t>(c) * height + i) * width + j] =
        value ? 1 : 0;
  }

  std::uint8_t* channel(int c) {
    return known.data() + static_cast<std::size_t>(c) * plane_size();
  }
  const std::uint8_t* channel(int c) const {
    return known.data() + static_cast<std::size_t>(c) * plane_size();
  }

  std::size_t count_known() const {
    std::size_t n = 0;
    for (auto b : known) n += b ? 1 : 0;
    return n;
  }
};

// Channels past the last full window of four are passed through untouched.
inline int full_quad_count(int channels) { return channels / kQuadSize; }

// Element mask that simply broadcasts a channel mask: every coefficient of a
// present channel is known, every coefficient of a missing one is not. This is
// the element-level view when no rearrangement is active.
inline ElementMask broadcast_mask(const ChannelMask& mask, int height,
                                  int width) {
  ElementMask out(mask.channels(), height, width, false);
  for (int c = 0; c < mask.channels(); ++c) {
    if (!mask.received(c)) continue;
    auto* row = out.channel(c);
    for (int i = 0; i < out.plane_size(); ++i) row[i] = 1;
  }
  return out;
}

}  // namespace lrpc
