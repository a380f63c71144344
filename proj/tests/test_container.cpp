#include <catch2/catch_amalgamated.hpp>
#include <random>
#include <set>

#include "lrpc/packetize.hpp"
#include "lrpc/wire.hpp"

using namespace lrpc;

namespace {

BaseLayer random_base(std::mt19937_64& rng, int channels) {
  BaseLayer b;
  b.width = static_cast<std::uint16_t>(16 + rng() % 2000);
  b.height = static_cast<std::uint16_t>(16 + rng() % 2000);
  b.channels = static_cast<std::uint16_t>(channels);
  b.quality_id = static_cast<std::uint8_t>(1 + rng() % 3);
  b.rearranged = (rng() & 1) != 0;
  for (int c = 0; c < channels; ++c) {
    b.scale_codes.push_back(static_cast<std::uint8_t>(rng() % 256));
    b.payload_sizes.push_back(static_cast<std::uint16_t>(rng() % 1200));
  }
  return b;
}

bool same_base(const BaseLayer& a, const BaseLayer& b) {
  return a.width == b.width && a.height == b.height &&
         a.channels == b.channels && a.quality_id == b.quality_id &&
         a.rearranged == b.rearranged && a.scale_codes == b.scale_codes &&
         a.payload_sizes == b.payload_sizes;
}

bool same_packet(const Packet& a, const Packet& b) {
  return a.type == b.type && a.seq == b.seq && a.channels == b.channels &&
         a.payload == b.payload;
}

void check_plan_shape(const PacketPlan& plan,
                      const std::vector<std::size_t>& actual,
                      std::size_t budget, bool rearranged) {
  int expect = 0;
  for (const auto& g : plan.groups) {
    REQUIRE(!g.empty());
    for (int c : g) REQUIRE(c == expect++);
    REQUIRE(detail::group_wire_size(g, actual) <= budget);
  }
  REQUIRE(static_cast<std::size_t>(expect) == actual.size());
  if (rearranged) {
    for (std::size_t i = 0; i + 1 < plan.groups.size(); ++i) {
      const auto& g = plan.groups[i];
      if (g.size() >= 2) REQUIRE((g.back() + 1) % 4 != 0);
    }
  }
}

}  // namespace

TEST_CASE("base layer round trip") {
  std::mt19937_64 rng(42);
  for (int channels : {0, 1, 5, 192, 500}) {
    const BaseLayer base = random_base(rng, channels);
    const bytes wire = write_base(base);
    REQUIRE(wire.size() == 17 + 3 * static_cast<std::size_t>(channels));
    REQUIRE(same_base(parse_base(wire), base));
  }
  // 192 channels: 17 + 576 bytes of header, tables and checksum.
  BaseLayer b = random_base(rng, 192);
  CHECK(write_base(b).size() == 593);

  b.scale_codes.pop_back();
  CHECK_THROWS_AS(write_base(b), error);
}

TEST_CASE("base layer rejects corruption") {
  std::mt19937_64 rng(7);
  const bytes wire = write_base(random_base(rng, 24));
  for (std::size_t i = 0; i < wire.size(); ++i) {
    bytes bad = wire;
    bad[i] ^= 0x40;
    CHECK_THROWS_AS(parse_base(bad), parse_error);
  }
  for (std::size_t len = 0; len < wire.size(); ++len)
    CHECK_THROWS_AS(parse_base(wire.data(), len), parse_error);
  bytes extended = wire;
  extended.push_back(0);
  CHECK_THROWS_AS(parse_base(extended), parse_error);
}

TEST_CASE("packet round trip and wire size") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    Packet p;
    p.type = static_cast<std::uint8_t>(rng() % 2);
    p.seq = static_cast<std::uint16_t>(rng());
    if (p.type == 1) {
      const std::size_t k = rng() % 12;
      for (std::size_t i = 0; i < k; ++i)
        p.channels.push_back(static_cast<std::uint16_t>(rng() % 192));
    }
    p.payload.resize(rng() % 900);
    for (auto& x : p.payload) x = static_cast<std::uint8_t>(rng());

    const bytes wire = serialize_packet(p);
    REQUIRE(wire.size() == 11 + 2 * p.channels.size() + p.payload.size());
    REQUIRE(wire.size() == p.serialized_size());
    REQUIRE(same_packet(parse_packet(wire), p));
  }
}

TEST_CASE("packet rejects corruption") {
  Packet p;
  p.type = 1;
  p.seq = 301;
  p.channels = {10, 11, 12};
  p.payload = {9, 8, 7, 6, 5, 4};
  const bytes wire = serialize_packet(p);
  for (std::size_t i = 0; i < wire.size(); ++i) {
    bytes bad = wire;
    bad[i] ^= 0x01;
    CHECK_THROWS_AS(parse_packet(bad), parse_error);
  }
  for (std::size_t len = 0; len < wire.size(); ++len)
    CHECK_THROWS_AS(parse_packet(wire.data(), len, nullptr), parse_error);

  Packet odd = p;
  odd.type = 7;  // checksummed correctly but not a known type
  CHECK_THROWS_AS(parse_packet(serialize_packet(odd)), parse_error);

  Packet wide = p;
  wide.channels.assign(256, 1);
  CHECK_THROWS_AS(serialize_packet(wide), error);
  Packet fat = p;
  fat.payload.assign(0x10000, 0);
  CHECK_THROWS_AS(serialize_packet(fat), error);
}

TEST_CASE("packet streams parse in sequence") {
  std::mt19937_64 rng(1234);
  std::vector<Packet> sent;
  bytes stream;
  for (int i = 0; i < 6; ++i) {
    Packet p;
    p.type = 1;
    p.seq = static_cast<std::uint16_t>(i);
    p.channels = {static_cast<std::uint16_t>(2 * i),
                  static_cast<std::uint16_t>(2 * i + 1)};
    p.payload.resize(5 + rng() % 40);
    for (auto& x : p.payload) x = static_cast<std::uint8_t>(rng());
    const bytes wire = serialize_packet(p);
    stream.insert(stream.end(), wire.begin(), wire.end());
    sent.push_back(std::move(p));
  }
  const auto got = parse_packet_stream(stream);
  REQUIRE(got.size() == sent.size());
  for (std::size_t i = 0; i < got.size(); ++i)
    REQUIRE(same_packet(got[i], sent[i]));

  bytes broken = stream;
  broken[stream.size() / 2] ^= 0xFF;
  CHECK_THROWS_AS(parse_packet_stream(broken), parse_error);
}

TEST_CASE("hand-traced packet plans") {
  // Four 300-byte channels under a 920-byte budget pack three-and-one.
  {
    const std::vector<std::size_t> sizes(4, 300);
    const PacketPlan plan = plan_packets(sizes, sizes, 920, false);
    REQUIRE(plan.groups ==
            std::vector<std::vector<int>>{{0, 1, 2}, {3}});
  }
  // Four 400-byte channels under 900: pairs, then the second pair may not
  // end on the fourth channel, so its tail moves out.
  {
    const std::vector<std::size_t> sizes(4, 400);
    const PacketPlan plan = plan_packets(sizes, sizes, 900, true);
    REQUIRE(plan.groups ==
            std::vector<std::vector<int>>{{0, 1}, {2}, {3}});
    // Without rearrangement the pairs stand.
    const PacketPlan flat = plan_packets(sizes, sizes, 900, false);
    REQUIRE(flat.groups == std::vector<std::vector<int>>{{0, 1}, {2, 3}});
  }
}

TEST_CASE("a channel bigger than the budget is a hard error") {
  const std::vector<std::size_t> sizes{1200};
  try {
    plan_packets(sizes, sizes, 900, false);
    FAIL("oversized channel did not raise");
  } catch (const error& e) {
    CHECK(std::string(e.what()).find("coarser") != std::string::npos);
  }
}

TEST_CASE("plan properties hold on random size vectors") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 2000; ++trial) {
    const int channels = 1 + static_cast<int>(rng() % 256);
    std::vector<std::size_t> actual(channels);
    for (auto& s : actual) s = rng() % 600;
    // Estimates range from exact to useless; the plan must hold regardless.
    std::vector<std::size_t> estimated = actual;
    if (trial % 3 == 1)
      for (auto& s : estimated) s = (s * (rng() % 200)) / 100;
    else if (trial % 3 == 2)
      for (auto& s : estimated) s = rng() % 600;
    const bool rearranged = (trial & 1) != 0;

    const PacketPlan plan = plan_packets(estimated, actual, 900, rearranged);
    check_plan_shape(plan, actual, 900, rearranged);
    const PacketPlan again = plan_packets(estimated, actual, 900, rearranged);
    REQUIRE(again.groups == plan.groups);
  }
}

TEST_CASE("base layer fragments and payload packets") {
  std::mt19937_64 rng(555);
  const int channels = 192;
  BaseLayer base = random_base(rng, channels);
  std::vector<bytes> payloads(channels);
  for (int c = 0; c < channels; ++c) {
    payloads[c].resize(40 + rng() % 200);
    for (auto& x : payloads[c]) x = static_cast<std::uint8_t>(rng());
    base.payload_sizes[c] = static_cast<std::uint16_t>(payloads[c].size());
  }
  const bytes base_bytes = write_base(base);
  std::vector<std::size_t> sizes;
  for (const auto& p : payloads) sizes.push_back(p.size());
  const PacketPlan plan = plan_packets(sizes, sizes, 300, true);

  const auto packets = build_packets(base_bytes, plan, payloads, 300);

  // Fragments first, in order, all under the budget, reassembling the base.
  bytes reassembled;
  std::size_t idx = 0;
  std::uint16_t expect_seq = 0;
  while (idx < packets.size() && packets[idx].type == 0) {
    REQUIRE(packets[idx].seq == expect_seq++);
    REQUIRE(packets[idx].channels.empty());
    REQUIRE(serialize_packet(packets[idx]).size() <= 300);
    reassembled.insert(reassembled.end(), packets[idx].payload.begin(),
                       packets[idx].payload.end());
    ++idx;
  }
  REQUIRE(reassembled == base_bytes);
  REQUIRE(idx == 3);  // 593 bytes of base in 289-byte chunks

  // Payload packets mirror the plan with concatenated channel bytes.
  REQUIRE(packets.size() - idx == plan.groups.size());
  for (std::size_t g = 0; g < plan.groups.size(); ++g) {
    const Packet& p = packets[idx + g];
    REQUIRE(p.type == 1);
    REQUIRE(p.seq == expect_seq++);
    REQUIRE(p.channels.size() == plan.groups[g].size());
    bytes concat;
    for (std::size_t i = 0; i < p.channels.size(); ++i) {
      REQUIRE(p.channels[i] ==
              static_cast<std::uint16_t>(plan.groups[g][i]));
      concat.insert(concat.end(), payloads[plan.groups[g][i]].begin(),
                    payloads[plan.groups[g][i]].end());
    }
    REQUIRE(p.payload == concat);
    REQUIRE(serialize_packet(p).size() <= 300);
  }
}

TEST_CASE("file container round trip") {
  std::mt19937_64 rng(31337);
  BaseLayer base = random_base(rng, 8);
  std::vector<bytes> payloads(8);
  for (int c = 0; c < 8; ++c) {
    payloads[c].resize(rng() % 300);
    for (auto& x : payloads[c]) x = static_cast<std::uint8_t>(rng());
    base.payload_sizes[c] = static_cast<std::uint16_t>(payloads[c].size());
  }
  const bytes file = write_lrpc(base, payloads);
  REQUIRE(file.size() == base.serialized_size() + base.total_payload_bytes());
  const LrpcFile parsed = parse_lrpc(file);
  REQUIRE(same_base(parsed.base, base));
  REQUIRE(parsed.payloads == payloads);

  bytes cut(file.begin(), file.end() - 1);
  CHECK_THROWS_AS(parse_lrpc(cut), parse_error);
  bytes extended = file;
  extended.push_back(0);
  CHECK_THROWS_AS(parse_lrpc(extended), parse_error);
}
