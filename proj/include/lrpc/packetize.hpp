#pragma once
// Packet planning: group channel payloads into packets under a hard size
// budget, keeping channels in order, one channel never split across packets.
//
// Three phases:
//  1. greedy fill using the predicted payload sizes;
//  2. any packet whose real serialized size still exceeds the budget is split
//     recursively into halves by channel count;
//  3. in rearranged mode, a packet holding more than one channel must not end
//     on a channel index divisible by four (1-based) -- ending there would
//     align packet boundaries with quad boundaries and concentrate a loss on
//     a single quad -- so the offending tail channel moves to the front of
//     the next packet, growing the plan by one packet if needed.
// A phase-3 move can push the receiving packet back over the budget, so
// phases 2 and 3 repeat until neither changes anything. Splitting strictly
// increases the packet count, which is bounded by the channel count, so the
// loop terminates.

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "lrpc/latent.hpp"
#include "lrpc/wire.hpp"

namespace lrpc {

inline constexpr std::size_t kDefaultPacketBudget = 900;

// Header + CRC bytes of a payload packet carrying k channels.
inline std::size_t packet_overhead(std::size_t k) { return 11 + 2 * k; }

struct PacketPlan {
  // Channel ids (0-based, consecutive, increasing) of each payload packet.
  std::vector<std::vector<int>> groups;

  std::size_t packet_count() const { return groups.size(); }
};

namespace detail {

inline std::size_t group_payload(const std::vector<int>& group,
                                 const std::vector<std::size_t>& sizes) {
  std::size_t n = 0;
  for (int c : group) n += sizes[c];
  return n;
}

inline std::size_t group_wire_size(const std::vector<int>& group,
                                   const std::vector<std::size_t>& sizes) {
  return packet_overhead(group.size()) + group_payload(group, sizes);
}

inline void split_oversized(const std::vector<int>& group,
                            const std::vector<std::size_t>& actual,
                            std::size_t budget,
                            std::vector<std::vector<int>>& out) {
  if (group_wire_size(group, actual) <= budget) {
    out.push_back(group);
    return;
  }
  if (group.size() == 1)
    throw error("channel " + std::to_string(group[0]) +
                " alone exceeds the packet budget; use a coarser quality "
                "preset");
  const std::size_t half = group.size() / 2;
  split_oversized({group.begin(), group.begin() + half}, actual, budget, out);
  split_oversized({group.begin() + half, group.end()}, actual, budget, out);
}

}  // namespace detail

inline PacketPlan plan_packets(const std::vector<std::size_t>& estimated,
                               const std::vector<std::size_t>& actual,
                               std::size_t budget, bool rearranged) {
  if (estimated.size() != actual.size())
    throw error("estimated and actual size lists disagree");
  const int channels = static_cast<int>(actual.size());
  PacketPlan plan;
  if (channels == 0) return plan;

  // Phase 1: greedy on estimates. A channel always enters an empty packet
  // even if oversized; phase 2 owns the hard budget.
  std::vector<int> cur;
  std::size_t cur_est = 0;
  for (int c = 0; c < channels; ++c) {
    const bool fits =
        cur.empty() ||
        cur_est + estimated[c] + packet_overhead(cur.size() + 1) <= budget;
    if (!fits) {
      plan.groups.push_back(std::move(cur));
      cur.clear();
      cur_est = 0;
    }
    cur.push_back(c);
    cur_est += estimated[c];
  }
  plan.groups.push_back(std::move(cur));

  for (;;) {
    // Phase 2: enforce the budget on real serialized sizes.
    std::vector<std::vector<int>> split;
    for (const auto& g : plan.groups)
      detail::split_oversized(g, actual, budget, split);
    bool changed = split.size() != plan.groups.size();
    plan.groups = std::move(split);

    if (!rearranged) break;

    // Phase 3: unpin packet ends from quad boundaries.
    for (std::size_t i = 0; i < plan.groups.size(); ++i) {
      auto& g = plan.groups[i];
      if (g.size() <= 1 || (g.back() + 1) % kQuadSize != 0) continue;
      const int moved = g.back();
      g.pop_back();
      if (i + 1 == plan.groups.size()) plan.groups.emplace_back();
      plan.groups[i + 1].insert(plan.groups[i + 1].begin(), moved);
      changed = true;
    }
    if (!changed) break;
  }
  return plan;
}

// The plan's packets, preceded by the base layer split into fragments that
// also respect the budget. Sequence numbers are global and increasing.
inline std::vector<Packet> build_packets(const bytes& base_bytes,
                                         const PacketPlan& plan,
                                         const std::vector<bytes>& payloads,
                                         std::size_t budget) {
  std::vector<Packet> out;
  std::uint16_t seq = 0;
  if (budget <= packet_overhead(0))
    throw error("packet budget smaller than the packet overhead");
  const std::size_t chunk = budget - packet_overhead(0);
  for (std::size_t pos = 0; pos < base_bytes.size(); pos += chunk) {
    Packet p;
    p.type = 0;
    p.seq = seq++;
    const std::size_t n = std::min(chunk, base_bytes.size() - pos);
    p.payload.assign(base_bytes.begin() + pos, base_bytes.begin() + pos + n);
    out.push_back(std::move(p));
  }
  for (const auto& g : plan.groups) {
    Packet p;
    p.type = 1;
    p.seq = seq++;
    for (int c : g) {
      p.channels.push_back(static_cast<std::uint16_t>(c));
      p.payload.insert(p.payload.end(), payloads[c].begin(), payloads[c].end());
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace lrpc
