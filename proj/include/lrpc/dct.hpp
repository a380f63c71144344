#pragma once
// Orthonormal 8x8 DCT-II pair and the standard zigzag scan.
// Both transforms use a precomputed basis and a fixed accumulation order
// (rows first, then columns) so results are bit-identical across runs.

#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "lrpc/common.hpp"

namespace lrpc {

inline constexpr int kBlock = 8;
inline constexpr int kBlockArea = kBlock * kBlock;

namespace detail {

// basis[k][n] = c_k * cos((2n+1) * k * pi / 16), c_0 = sqrt(1/8), c_k = 1/2.
inline const std::array<std::array<double, kBlock>, kBlock>& dct_basis() {
  static const auto basis = [] {
    std::array<std::array<double, kBlock>, kBlock> b{};
    for (int k = 0; k < kBlock; ++k) {
      const double ck = k == 0 ? std::sqrt(1.0 / 8.0) : 0.5;
      for (int n = 0; n < kBlock; ++n)
        b[k][n] = ck * std::cos((2 * n + 1) * k * std::numbers::pi / 16.0);
    }
    return b;
  }();
  return basis;
}

struct zigzag_tables {
  std::array<std::uint8_t, kBlockArea> coord;  // z -> u*8+v
  std::array<std::uint8_t, kBlockArea> index;  // u*8+v -> z
};

// Walk the anti-diagonals, alternating direction, exactly the JPEG scan.
inline const zigzag_tables& zigzag() {
  static const auto tables = [] {
    zigzag_tables t{};
    int z = 0;
    for (int d = 0; d <= 2 * (kBlock - 1); ++d) {
      const int lo = d < kBlock ? 0 : d - (kBlock - 1);
      const int hi = d < kBlock ? d : kBlock - 1;
      if (d % 2 != 0) {
        for (int u = lo; u <= hi; ++u, ++z) {
          t.coord[z] = static_cast<std::uint8_t>(u * kBlock + (d - u));
          t.index[u * kBlock + (d - u)] = static_cast<std::uint8_t>(z);
        }
      } else {
        for (int u = hi; u >= lo; --u, ++z) {
          t.coord[z] = static_cast<std::uint8_t>(u * kBlock + (d - u));
          t.index[u * kBlock + (d - u)] = static_cast<std::uint8_t>(z);
        }
      }
    }
    return t;
  }();
  return tables;
}

}  // namespace detail

// Frequency index z for coordinates (u = row frequency, v = column frequency).
inline int zigzag_index(int u, int v) {
  if (u < 0 || u >= kBlock || v < 0 || v >= kBlock)
    throw error("zigzag coordinate out of range");
  return detail::zigzag().index[u * kBlock + v];
}

inline std::pair<int, int> zigzag_coord(int z) {
  if (z < 0 || z >= kBlockArea) throw error("zigzag index out of range");
  const int c = detail::zigzag().coord[z];
  return {c / kBlock, c % kBlock};
}

inline void forward_dct_8x8(const double* in, double* out) {
  const auto& b = detail::dct_basis();
  double tmp[kBlockArea];
  for (int i = 0; i < kBlock; ++i)
    for (int k = 0; k < kBlock; ++k) {
      double acc = 0.0;
      for (int n = 0; n < kBlock; ++n) acc += b[k][n] * in[i * kBlock + n];
      tmp[i * kBlock + k] = acc;
    }
  for (int j = 0; j < kBlock; ++j)
    for (int k = 0; k < kBlock; ++k) {
      double acc = 0.0;
      for (int n = 0; n < kBlock; ++n) acc += b[k][n] * tmp[n * kBlock + j];
      out[k * kBlock + j] = acc;
    }
}

inline void inverse_dct_8x8(const double* in, double* out) {
  const auto& b = detail::dct_basis();
  double tmp[kBlockArea];
  for (int j = 0; j < kBlock; ++j)
    for (int n = 0; n < kBlock; ++n) {
      double acc = 0.0;
      for (int k = 0; k < kBlock; ++k) acc += b[k][n] * in[k * kBlock + j];
      tmp[n * kBlock + j] = acc;
    }
  for (int i = 0; i < kBlock; ++i)
    for (int n = 0; n < kBlock; ++n) {
      double acc = 0.0;
      for (int k = 0; k < kBlock; ++k) acc += b[k][n] * tmp[i * kBlock + k];
      out[i * kBlock + n] = acc;
    }
}

}  // namespace lrpc
