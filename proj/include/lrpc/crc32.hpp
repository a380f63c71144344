#pragma once
// CRC-32 (reflected polynomial 0xEDB88320), the checksum of the wire format.

#include <array>
#include <cstddef>
#include <cstdint>

#include "lrpc/common.hpp"

namespace lrpc {

namespace detail {

inline const std::array<std::uint32_t, 256>& crc32_table() {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  return table;
}

}  // namespace detail

inline std::uint32_t crc32(const std::uint8_t* data, std::size_t n) {
  const auto& t = detail::crc32_table();
  std::uint32_t c = 0xFFFFFFFFu;
  for (std::size_t i = 0; i < n; ++i) c = t[(c ^ data[i]) & 0xFFu] ^ (c >> 8);
  return c ^ 0xFFFFFFFFu;
}

inline std::uint32_t crc32(const bytes& b) { return crc32(b.data(), b.size()); }

}  // namespace lrpc
