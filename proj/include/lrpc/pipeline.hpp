#pragma once
// Sender-side pipeline glue: image -> latent -> (rearrange) -> per-channel
// payloads -> base layer / file / packets, and the lossless decode path.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lrpc/codec.hpp"
#include "lrpc/entropy.hpp"
#include "lrpc/packetize.hpp"
#include "lrpc/scr.hpp"
#include "lrpc/wire.hpp"

namespace lrpc {

struct EncodeResult {
  BaseLayer base;
  std::vector<bytes> payloads;        // one per coded channel
  std::vector<std::size_t> estimates; // predicted payload sizes
  Latent coded;                       // the latent as transmitted
};

inline EncodeResult encode_image(const ImageBuffer& img,
                                 const QualityPreset& preset,
                                 bool rearrange) {
  EncodeResult out;
  AnalysisResult a = analysis(img, preset);
  out.coded = rearrange ? scr_forward(a.latent) : std::move(a.latent);

  const int channels = out.coded.channels;
  const std::size_t plane = out.coded.plane_size();
  out.base.width = static_cast<std::uint16_t>(img.width);
  out.base.height = static_cast<std::uint16_t>(img.height);
  out.base.channels = static_cast<std::uint16_t>(channels);
  out.base.quality_id = static_cast<std::uint8_t>(preset.id);
  out.base.rearranged = rearrange;
  out.base.scale_codes.resize(channels);
  out.base.payload_sizes.resize(channels);
  out.payloads.resize(channels);
  out.estimates.resize(channels);
  for (int c = 0; c < channels; ++c) {
    std::span<const std::int16_t> values(out.coded.channel(c), plane);
    const std::uint8_t code = estimate_scale(values);
    out.base.scale_codes[c] = code;
    out.payloads[c] = encode_channel(values, code);
    out.estimates[c] = estimate_size(values, code);
    if (out.payloads[c].size() > 0xFFFF)
      throw error("channel payload exceeds the size table range");
    out.base.payload_sizes[c] =
        static_cast<std::uint16_t>(out.payloads[c].size());
  }
  return out;
}

inline bytes file_bytes(const EncodeResult& er) {
  return write_lrpc(er.base, er.payloads);
}

// Base fragments plus planned payload packets under the budget.
inline std::vector<Packet> packetize(const EncodeResult& er,
                                     std::size_t budget) {
  const PacketPlan plan = plan_packets(
      er.estimates,
      [&] {
        std::vector<std::size_t> actual(er.payloads.size());
        for (std::size_t i = 0; i < er.payloads.size(); ++i)
          actual[i] = er.payloads[i].size();
        return actual;
      }(),
      budget, er.base.rearranged);
  return build_packets(write_base(er.base), plan, er.payloads, budget);
}

// Lossless decode of a complete file.
inline ImageBuffer decode_file(const bytes& file) {
  const LrpcFile f = parse_lrpc(file);
  const int channels = f.base.channels;
  const int lh = round_up(f.base.height, kPadMultiple) / kBlock;
  const int lw = round_up(f.base.width, kPadMultiple) / kBlock;
  Latent latent(channels, lh, lw);
  const std::size_t plane = static_cast<std::size_t>(lh) * lw;
  for (int c = 0; c < channels; ++c) {
    auto values = decode_channel(
        std::span<const std::uint8_t>(f.payloads[c].data(),
                                      f.payloads[c].size()),
        f.base.scale_codes[c], plane);
    std::copy(values.begin(), values.end(), latent.channel(c));
  }
  if (f.base.rearranged) latent = scr_inverse(latent);
  return synthesis(latent, preset_by_id(f.base.quality_id), f.base.width,
                   f.base.height);
}

}  // namespace lrpc
