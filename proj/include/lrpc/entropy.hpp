#pragma once
// Per-channel entropy coding: pick a scale code from the data, encode the
// values under the discretized Laplacian for that code, and predict payload
// sizes without running the coder.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "lrpc/model.hpp"
#include "lrpc/range_coder.hpp"

namespace lrpc {

// Scale code for a value sequence: 0 if all zero, otherwise the code whose
// sigma is closest (in eighth-of-an-octave steps) to sqrt(2) * mean |v|, the
// Laplacian moment-matching estimate.
inline std::uint8_t estimate_scale(std::span<const std::int16_t> values) {
  double acc = 0.0;
  for (auto v : values) acc += std::abs(static_cast<double>(v));
  if (acc == 0.0) return 0;
  const double mean_abs = acc / static_cast<double>(values.size());
  const double code =
      128.0 + 8.0 * std::log2(std::numbers::sqrt2 * mean_abs);
  const long rounded = std::lround(code);
  return static_cast<std::uint8_t>(std::clamp(rounded, 1L, 255L));
}

inline bytes encode_channel(std::span<const std::int16_t> values,
                            std::uint8_t scale_code) {
  if (values.empty()) return {};
  if (scale_code == 0) {
    for (auto v : values)
      if (v != 0) throw error("scale code 0 requires an all-zero channel");
    return {};
  }
  const SymbolModel model = SymbolModel::from_code(scale_code);
  range_encoder enc;
  for (auto v : values) {
    const int s = SymbolModel::symbol_of(v);
    enc.encode(model.cum[s], model.freq[s], kFreqTotal);
  }
  return enc.finish();
}

inline std::vector<std::int16_t> decode_channel(
    std::span<const std::uint8_t> payload, std::uint8_t scale_code,
    std::size_t count) {
  if (count == 0) {
    if (!payload.empty()) throw decode_error("payload for an empty channel");
    return {};
  }
  if (scale_code == 0) {
    if (!payload.empty())
      throw decode_error("scale code 0 carries no payload");
    return std::vector<std::int16_t>(count, 0);
  }
  if (payload.empty()) throw decode_error("entropy payload truncated");
  const SymbolModel model = SymbolModel::from_code(scale_code);
  range_decoder dec(payload.data(), payload.size());
  std::vector<std::int16_t> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const int s = model.lookup(dec.decode_freq(kFreqTotal));
    dec.decode_update(model.cum[s], model.freq[s]);
    out[i] = static_cast<std::int16_t>(SymbolModel::value_of(s));
  }
  if (dec.consumed() != payload.size())
    throw decode_error("entropy payload has trailing bytes");
  return out;
}

// Cross-entropy of the values under the model, in bits.
inline double cross_entropy_bits(std::span<const std::int16_t> values,
                                 const SymbolModel& model) {
  double bits = 0.0;
  for (auto v : values) {
    const int s = SymbolModel::symbol_of(v);
    bits -= std::log2(static_cast<double>(model.freq[s]) / kFreqTotal);
  }
  return bits;
}

// Predicted payload size in bytes: cross-entropy rounded up, plus two bytes
// of coder slack. Never less than the real payload minus two.
inline std::size_t estimate_size(std::span<const std::int16_t> values,
                                 std::uint8_t scale_code) {
  if (values.empty() || scale_code == 0) return 0;
  const SymbolModel model = SymbolModel::from_code(scale_code);
  const double bits = cross_entropy_bits(values, model);
  return static_cast<std::size_t>(std::ceil(bits / 8.0)) + 2;
}

}  // namespace lrpc
