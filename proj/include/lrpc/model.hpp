#pragma once
// Symbol probability model: an 8-bit scale code selects a discretized
// Laplacian over the value alphabet [-255, 255], integerized to a fixed
// 16-bit frequency total. Encoder and decoder rebuild the identical table
// from the code alone, so the table construction below is part of the wire
// contract.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "lrpc/common.hpp"
#include "lrpc/latent.hpp"
#include "lrpc/range_coder.hpp"

namespace lrpc {

inline constexpr int kAlphabetSize = kValueMax - kValueMin + 1;  // 511

// Code 0 is reserved for "channel entirely zero, no payload". Codes 1..255
// map to sigma = 2^((code - 128) / 8): code 128 is sigma 1, each step of 8
// doubles the scale.
inline double scale_from_code(std::uint8_t code) {
  if (code == 0) throw error("scale code 0 has no distribution");
  return std::exp2((static_cast<int>(code) - 128) / 8.0);
}

struct SymbolModel {
  std::array<std::uint16_t, kAlphabetSize> freq;
  std::array<std::uint32_t, kAlphabetSize + 1> cum;  // cum[s] .. cum[s+1]

  static int symbol_of(int value) { return value - kValueMin; }
  static int value_of(int symbol) { return symbol + kValueMin; }

  // Symbol whose cumulative interval contains f; f < kFreqTotal.
  int lookup(std::uint32_t f) const {
    int lo = 0, hi = kAlphabetSize - 1;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (cum[mid + 1] <= f)
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo;
  }

  // Laplacian with scale b = sigma / sqrt(2), integrated over unit bins
  // centred on each value (open tails at the ends), each mass floored at
  // 1/65536 and the total renormalized to exactly 65536 by adjusting the
  // largest entries. Every step is integer or deterministic double math.
  static SymbolModel from_sigma(double sigma) {
    const double b = sigma / std::numbers::sqrt2;
    auto cdf = [b](double x) {
      return x < 0.0 ? 0.5 * std::exp(x / b) : 1.0 - 0.5 * std::exp(-x / b);
    };
    SymbolModel m;
    std::int64_t total = 0;
    for (int s = 0; s < kAlphabetSize; ++s) {
      const int v = value_of(s);
      double p;
      if (v == kValueMin)
        p = cdf(v + 0.5);
      else if (v == kValueMax)
        p = 1.0 - cdf(v - 0.5);
      else
        p = cdf(v + 0.5) - cdf(v - 0.5);
      // Clamp so one symbol can never crowd out the floor of the others.
      constexpr std::int64_t kMaxMass = kFreqTotal - (kAlphabetSize - 1);
      const std::int64_t f = std::clamp<std::int64_t>(
          std::llround(p * kFreqTotal), 1, kMaxMass);
      m.freq[s] = static_cast<std::uint16_t>(f);
      total += f;
    }
    // Settle the rounding difference on the most probable symbols so the
    // relative distortion is smallest; ties break on the lower symbol.
    std::int64_t diff = static_cast<std::int64_t>(kFreqTotal) - total;
    if (diff > 0) {
      int best = 0;
      for (int s = 1; s < kAlphabetSize; ++s)
        if (m.freq[s] > m.freq[best]) best = s;
      m.freq[best] = static_cast<std::uint16_t>(m.freq[best] + diff);
    }
    while (diff < 0) {
      int best = 0;
      for (int s = 1; s < kAlphabetSize; ++s)
        if (m.freq[s] > m.freq[best]) best = s;
      const std::int64_t cut = std::min(-diff, std::int64_t{m.freq[best]} - 1);
      m.freq[best] = static_cast<std::uint16_t>(m.freq[best] - cut);
      diff += cut;
    }
    m.cum[0] = 0;
    for (int s = 0; s < kAlphabetSize; ++s) m.cum[s + 1] = m.cum[s] + m.freq[s];
    return m;
  }

  static SymbolModel from_code(std::uint8_t code) {
    return from_sigma(scale_from_code(code));
  }
};

}  // namespace lrpc
