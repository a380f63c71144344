#pragma once
// Receiver: reassemble the base layer, decode whatever payload packets
// arrived, derive element-level visibility, conceal the holes, synthesize.
//
// Three kinds of missing data are kept apart: a channel the sender never
// transmitted (progressive tail) stays zero; a transmitted channel that was
// lost is eligible for concealment; everything received is left untouched.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "lrpc/codec.hpp"
#include "lrpc/entropy.hpp"
#include "lrpc/latent.hpp"
#include "lrpc/scr.hpp"
#include "lrpc/wire.hpp"

namespace lrpc {

enum class Concealment { none, interpolate };

inline Concealment parse_concealment(const std::string& name) {
  if (name == "none" || name == "zero") return Concealment::none;
  if (name == "interpolate") return Concealment::interpolate;
  throw error("unknown concealment '" + name + "' (use none or interpolate)");
}

// Base-layer bytes recovered from type-0 fragments, in sequence order.
inline bytes reassemble_base(const std::vector<Packet>& packets) {
  std::vector<const Packet*> frags;
  for (const auto& p : packets)
    if (p.type == 0) frags.push_back(&p);
  std::sort(frags.begin(), frags.end(),
            [](const Packet* a, const Packet* b) { return a->seq < b->seq; });
  bytes out;
  for (const auto* p : frags)
    out.insert(out.end(), p->payload.begin(), p->payload.end());
  return out;
}

struct ReceivedState {
  BaseLayer base;
  Latent latent;        // coded domain, missing channels zero
  ChannelMask present;  // which coded channels were decoded
  int tail_start = 0;   // channels >= tail_start were never transmitted
};

// tail_start < 0 means everything was transmitted.
inline ReceivedState assemble(const bytes& base_bytes,
                              const std::vector<Packet>& packets,
                              int tail_start = -1) {
  ReceivedState st;
  st.base = parse_base(base_bytes);
  const int channels = st.base.channels;
  const int lh = round_up(st.base.height, kPadMultiple) / kBlock;
  const int lw = round_up(st.base.width, kPadMultiple) / kBlock;
  st.latent = Latent(channels, lh, lw);
  st.present = ChannelMask(channels, false);
  st.tail_start = tail_start < 0 ? channels : std::min(tail_start, channels);

  const std::size_t plane = static_cast<std::size_t>(lh) * lw;
  for (const auto& p : packets) {
    if (p.type != 1) continue;
    // The payload must be the concatenation the size table promises;
    // anything else means corruption, and the packet counts as lost.
    std::size_t want = 0;
    bool ok = true;
    for (auto c : p.channels) {
      if (c >= channels) {
        ok = false;
        break;
      }
      want += st.base.payload_sizes[c];
    }
    if (!ok || want != p.payload.size()) continue;
    std::size_t pos = 0;
    for (auto c : p.channels) {
      const std::size_t len = st.base.payload_sizes[c];
      try {
        auto values = decode_channel(
            std::span<const std::uint8_t>(p.payload.data() + pos, len),
            st.base.scale_codes[c], plane);
        std::copy(values.begin(), values.end(), st.latent.channel(c));
        st.present.set(c, true);
      } catch (const decode_error&) {
        // counts as lost; leave the channel zero
      }
      pos += len;
    }
  }
  return st;
}

namespace detail {

// Per-column linear interpolation between the nearest known rows; one-sided
// gaps copy the nearest anchor; columns with no anchor stay as they are.
inline void interpolate_channel(std::int16_t* values, const std::uint8_t* known,
                                const std::uint8_t* lost, int height,
                                int width) {
  std::vector<int> anchor_rows;
  for (int j = 0; j < width; ++j) {
    anchor_rows.clear();
    for (int i = 0; i < height; ++i)
      if (known[i * width + j]) anchor_rows.push_back(i);
    if (anchor_rows.empty()) continue;
    std::size_t next = 0;
    for (int i = 0; i < height; ++i) {
      if (!lost[i * width + j]) continue;
      while (next < anchor_rows.size() && anchor_rows[next] < i) ++next;
      double filled;
      if (next == 0) {
        filled = values[anchor_rows.front() * width + j];
      } else if (next == anchor_rows.size()) {
        filled = values[anchor_rows.back() * width + j];
      } else {
        const int ia = anchor_rows[next - 1];
        const int ib = anchor_rows[next];
        const double a = values[ia * width + j];
        const double b = values[ib * width + j];
        filled = a + (b - a) * (i - ia) / (ib - ia);
      }
      values[i * width + j] = static_cast<std::int16_t>(std::clamp<long>(
          std::lround(filled), kValueMin, kValueMax));
    }
  }
}

}  // namespace detail

// Fills elements that are transmitted-but-lost; known elements and
// never-transmitted elements are not written.
inline void conceal(Latent& latent, const ElementMask& known,
                    const ElementMask& transmitted, Concealment policy) {
  if (policy == Concealment::none) return;
  if (latent.channels != known.channels || latent.channels != transmitted.channels ||
      latent.plane_size() != known.plane_size() ||
      latent.plane_size() != transmitted.plane_size())
    throw error("mask shape does not match latent");
  std::vector<std::uint8_t> lost(latent.plane_size());
  for (int c = 0; c < latent.channels; ++c) {
    const std::uint8_t* k = known.channel(c);
    const std::uint8_t* t = transmitted.channel(c);
    bool any = false;
    for (int i = 0; i < latent.plane_size(); ++i) {
      lost[i] = (t[i] && !k[i]) ? 1 : 0;
      any = any || lost[i];
    }
    if (!any) continue;
    detail::interpolate_channel(latent.channel(c), k, lost.data(),
                                latent.height, latent.width);
  }
}

struct DecodedLatent {
  BaseLayer base;
  Latent latent;  // source domain, concealment already applied
};

// Receive path up to the coded domain: reassemble, undo the rearrangement,
// conceal. Throws parse_error if the base layer bytes are unusable --
// without them nothing can be decoded.
inline DecodedLatent reconstruct_latent(const bytes& base_bytes,
                                        const std::vector<Packet>& packets,
                                        Concealment policy,
                                        int tail_start = -1) {
  ReceivedState st = assemble(base_bytes, packets, tail_start);
  const int channels = st.base.channels;

  // Received channels beyond the declared tail would contradict the caller;
  // clamp the tail outward so data is never discarded.
  for (int c = st.tail_start; c < channels; ++c)
    if (st.present.received(c)) st.tail_start = c + 1;

  ChannelMask transmitted_mask(channels, false);
  for (int c = 0; c < st.tail_start; ++c) transmitted_mask.set(c, true);

  st.latent = apply_channel_mask(st.latent, st.present);
  Latent y = st.base.rearranged ? scr_inverse(st.latent) : st.latent;
  ElementMask known =
      st.base.rearranged
          ? mask_inverse(st.present, st.latent.height, st.latent.width)
          : broadcast_mask(st.present, st.latent.height, st.latent.width);
  ElementMask transmitted =
      st.base.rearranged
          ? mask_inverse(transmitted_mask, st.latent.height, st.latent.width)
          : broadcast_mask(transmitted_mask, st.latent.height,
                           st.latent.width);
  conceal(y, known, transmitted, policy);
  return {std::move(st.base), std::move(y)};
}

inline ImageBuffer reconstruct(const bytes& base_bytes,
                               const std::vector<Packet>& packets,
                               Concealment policy, int tail_start = -1) {
  DecodedLatent d = reconstruct_latent(base_bytes, packets, policy, tail_start);
  return synthesis(d.latent, preset_by_id(d.base.quality_id), d.base.width,
                   d.base.height);
}

}  // namespace lrpc
