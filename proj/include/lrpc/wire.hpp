#pragma once
// Wire formats. All multi-byte integers are big-endian; every structure ends
// in a CRC-32 over everything before it.
//
// Base layer (17 + 3C bytes):
//   "LRPC" | version 0x01 | width u16 | height u16 | channels u16 |
//   quality u8 | flags u8 (bit 0: rearrangement) |
//   scale codes u8[C] | payload sizes u16[C] | crc u32
//
// Packet (11 + 2k + len bytes):
//   marker 0x5A | type u8 (0 base fragment, 1 channel payload) | seq u16 |
//   count u8 | channel ids u16[k] | len u16 | payload | crc u32
//   Base fragments have count 0; their payload is a slice of the base layer.
//
// File (.lrpc): base layer followed by the channel payloads in channel order;
// payload boundaries come from the base-layer size table.

#include <cstdint>
#include <string>
#include <vector>

#include "lrpc/common.hpp"
#include "lrpc/crc32.hpp"

namespace lrpc {

inline constexpr std::uint8_t kFormatVersion = 0x01;
inline constexpr std::uint8_t kPacketMarker = 0x5A;
inline constexpr std::uint8_t kFlagRearranged = 0x01;

namespace detail {

inline void put_u16(bytes& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v >> 8));
  b.push_back(static_cast<std::uint8_t>(v));
}

inline void put_u32(bytes& b, std::uint32_t v) {
  b.push_back(static_cast<std::uint8_t>(v >> 24));
  b.push_back(static_cast<std::uint8_t>(v >> 16));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
  b.push_back(static_cast<std::uint8_t>(v));
}

inline std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>((p[0] << 8) | p[1]);
}

inline std::uint32_t get_u32(const std::uint8_t* p) {
  return (static_cast<std::uint32_t>(p[0]) << 24) |
         (static_cast<std::uint32_t>(p[1]) << 16) |
         (static_cast<std::uint32_t>(p[2]) << 8) | p[3];
}

}  // namespace detail

struct BaseLayer {
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::uint16_t channels = 0;
  std::uint8_t quality_id = 0;
  bool rearranged = false;
  std::vector<std::uint8_t> scale_codes;    // one per channel
  std::vector<std::uint16_t> payload_sizes; // one per channel, bytes

  std::size_t serialized_size() const { return 17 + 3 * std::size_t{channels}; }

  std::size_t total_payload_bytes() const {
    std::size_t n = 0;
    for (auto s : payload_sizes) n += s;
    return n;
  }
};

inline bytes write_base(const BaseLayer& base) {
  if (base.scale_codes.size() != base.channels ||
      base.payload_sizes.size() != base.channels)
    throw error("base layer tables do not match the channel count");
  bytes out;
  out.reserve(base.serialized_size());
  for (char c : {'L', 'R', 'P', 'C'}) out.push_back(static_cast<std::uint8_t>(c));
  out.push_back(kFormatVersion);
  detail::put_u16(out, base.width);
  detail::put_u16(out, base.height);
  detail::put_u16(out, base.channels);
  out.push_back(base.quality_id);
  out.push_back(base.rearranged ? kFlagRearranged : 0);
  out.insert(out.end(), base.scale_codes.begin(), base.scale_codes.end());
  for (auto s : base.payload_sizes) detail::put_u16(out, s);
  detail::put_u32(out, crc32(out));
  return out;
}

inline BaseLayer parse_base(const std::uint8_t* data, std::size_t size) {
  if (size < 17) throw parse_error("base layer truncated");
  if (data[0] != 'L' || data[1] != 'R' || data[2] != 'P' || data[3] != 'C')
    throw parse_error("base layer has bad magic");
  if (data[4] != kFormatVersion)
    throw parse_error("unsupported base layer version");
  BaseLayer base;
  base.width = detail::get_u16(data + 5);
  base.height = detail::get_u16(data + 7);
  base.channels = detail::get_u16(data + 9);
  base.quality_id = data[11];
  base.rearranged = (data[12] & kFlagRearranged) != 0;
  const std::size_t want = base.serialized_size();
  if (size < want) throw parse_error("base layer truncated");
  if (detail::get_u32(data + want - 4) != crc32(data, want - 4))
    throw parse_error("base layer checksum mismatch");
  base.scale_codes.assign(data + 13, data + 13 + base.channels);
  base.payload_sizes.resize(base.channels);
  for (int c = 0; c < base.channels; ++c)
    base.payload_sizes[c] = detail::get_u16(data + 13 + base.channels + 2 * c);
  return base;
}

inline BaseLayer parse_base(const bytes& b) {
  BaseLayer base = parse_base(b.data(), b.size());
  if (b.size() != base.serialized_size())
    throw parse_error("trailing bytes after base layer");
  return base;
}

struct Packet {
  std::uint8_t type = 1;  // 0 = base fragment, 1 = channel payload
  std::uint16_t seq = 0;
  std::vector<std::uint16_t> channels;  // empty for base fragments
  bytes payload;

  std::size_t serialized_size() const {
    return 11 + 2 * channels.size() + payload.size();
  }
};

inline bytes serialize_packet(const Packet& p) {
  if (p.channels.size() > 255) throw error("too many channels in one packet");
  if (p.payload.size() > 0xFFFF) throw error("packet payload too large");
  bytes out;
  out.reserve(p.serialized_size());
  out.push_back(kPacketMarker);
  out.push_back(p.type);
  detail::put_u16(out, p.seq);
  out.push_back(static_cast<std::uint8_t>(p.channels.size()));
  for (auto c : p.channels) detail::put_u16(out, c);
  detail::put_u16(out, static_cast<std::uint16_t>(p.payload.size()));
  out.insert(out.end(), p.payload.begin(), p.payload.end());
  detail::put_u32(out, crc32(out));
  return out;
}

// Parses one packet starting at data; *consumed gets its full size.
inline Packet parse_packet(const std::uint8_t* data, std::size_t size,
                           std::size_t* consumed = nullptr) {
  if (size < 11) throw parse_error("packet truncated");
  if (data[0] != kPacketMarker) throw parse_error("packet has bad marker");
  const std::size_t count = data[4];
  if (size < 7 + 2 * count) throw parse_error("packet truncated");
  const std::size_t len = detail::get_u16(data + 5 + 2 * count);
  const std::size_t want = 11 + 2 * count + len;
  if (size < want) throw parse_error("packet truncated");
  if (detail::get_u32(data + want - 4) != crc32(data, want - 4))
    throw parse_error("packet checksum mismatch");
  Packet p;
  p.type = data[1];
  if (p.type > 1) throw parse_error("unknown packet type");
  p.seq = detail::get_u16(data + 2);
  p.channels.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    p.channels[i] = detail::get_u16(data + 5 + 2 * i);
  p.payload.assign(data + 7 + 2 * count, data + 7 + 2 * count + len);
  if (consumed) *consumed = want;
  return p;
}

inline Packet parse_packet(const bytes& b) {
  std::size_t consumed = 0;
  Packet p = parse_packet(b.data(), b.size(), &consumed);
  if (consumed != b.size()) throw parse_error("trailing bytes after packet");
  return p;
}

inline std::vector<Packet> parse_packet_stream(const bytes& b) {
  std::vector<Packet> out;
  std::size_t pos = 0;
  while (pos < b.size()) {
    std::size_t consumed = 0;
    out.push_back(parse_packet(b.data() + pos, b.size() - pos, &consumed));
    pos += consumed;
  }
  return out;
}

struct LrpcFile {
  BaseLayer base;
  std::vector<bytes> payloads;  // one per channel
};

inline bytes write_lrpc(const BaseLayer& base,
                        const std::vector<bytes>& payloads) {
  if (payloads.size() != base.channels)
    throw error("payload list does not match the channel count");
  bytes out = write_base(base);
  for (int c = 0; c < base.channels; ++c) {
    if (payloads[c].size() != base.payload_sizes[c])
      throw error("payload size disagrees with the base layer table");
    out.insert(out.end(), payloads[c].begin(), payloads[c].end());
  }
  return out;
}

inline LrpcFile parse_lrpc(const bytes& b) {
  LrpcFile f;
  f.base = parse_base(b.data(), b.size());
  std::size_t pos = f.base.serialized_size();
  if (b.size() != pos + f.base.total_payload_bytes())
    throw parse_error("file size disagrees with the base layer table");
  f.payloads.resize(f.base.channels);
  for (int c = 0; c < f.base.channels; ++c) {
    f.payloads[c].assign(b.begin() + pos, b.begin() + pos + f.base.payload_sizes[c]);
    pos += f.base.payload_sizes[c];
  }
  return f;
}

}  // namespace lrpc
