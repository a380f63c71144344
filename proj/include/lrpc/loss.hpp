#pragma once
// Packet loss simulation: independent (uniform) losses and the two-state
// Gilbert-Elliott chain. Base-layer fragments model the reliably delivered
// side channel and are never dropped; the chain does not advance on them.
//
// Gilbert-Elliott, per payload packet: first decide loss from the current
// state (delivery probability k in Good, h in Bad), then step the state
// (Good->Bad with p, Bad->Good with r). Exactly two RNG draws per packet, in
// that order; the initial state is drawn from the stationary distribution
// with one extra draw. All draws go through rand_unit, so traces are
// byte-reproducible for a given seed.

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "lrpc/common.hpp"
#include "lrpc/wire.hpp"

namespace lrpc {

struct UniformParams {
  double pe = 0.0;  // loss probability
};

struct GEParams {
  double p = 0.0;  // Good -> Bad
  double r = 0.0;  // Bad -> Good
  double h = 0.0;  // delivery probability in Bad
  double k = 1.0;  // delivery probability in Good

  double stationary_good() const { return r / (p + r); }
  double stationary_bad() const { return p / (p + r); }
};

using LossModel = std::variant<UniformParams, GEParams>;

namespace detail {

inline double parse_prob(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = -1.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw error(std::string("bad ") + what + " '" + s + "'");
  }
  if (used != s.size() || v < 0.0 || v > 1.0)
    throw error(std::string(what) + " '" + s + "' is not a probability");
  return v;
}

}  // namespace detail

// "uniform:<pe>" or "ge:<p>,<r>,<h>,<k>".
inline LossModel parse_loss_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string args =
      colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "uniform") {
    return UniformParams{detail::parse_prob(args, "loss probability")};
  }
  if (kind == "ge") {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
      const auto comma = args.find(',', pos);
      parts.push_back(args.substr(pos, comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (parts.size() != 4)
      throw error("ge model needs four parameters p,r,h,k");
    GEParams ge;
    ge.p = detail::parse_prob(parts[0], "transition probability p");
    ge.r = detail::parse_prob(parts[1], "transition probability r");
    ge.h = detail::parse_prob(parts[2], "delivery probability h");
    ge.k = detail::parse_prob(parts[3], "delivery probability k");
    if (ge.p + ge.r <= 0.0)
      throw error("ge model is frozen: p + r must be positive");
    return ge;
  }
  throw error("unknown loss model '" + spec + "' (use uniform:<pe> or ge:<p>,<r>,<h>,<k>)");
}

// Non-fatal configuration smells, reported to the user but accepted.
inline std::string loss_model_warning(const LossModel& model) {
  if (const auto* ge = std::get_if<GEParams>(&model)) {
    if (ge->h >= ge->k)
      return "ge model: delivery in Bad (h) is not below delivery in Good "
             "(k); the states are swapped or degenerate";
  }
  return "";
}

inline std::string loss_spec_string(const LossModel& model) {
  char buf[96];
  if (const auto* u = std::get_if<UniformParams>(&model)) {
    std::snprintf(buf, sizeof buf, "uniform:%g", u->pe);
  } else {
    const auto& ge = std::get<GEParams>(model);
    std::snprintf(buf, sizeof buf, "ge:%g,%g,%g,%g", ge.p, ge.r, ge.h, ge.k);
  }
  return buf;
}

// Long-run loss fraction over payload packets.
inline double expected_loss_rate(const LossModel& model) {
  if (const auto* u = std::get_if<UniformParams>(&model)) return u->pe;
  const auto& ge = std::get<GEParams>(model);
  const double delivered =
      ge.stationary_good() * ge.k + ge.stationary_bad() * ge.h;
  return 1.0 - delivered;
}

enum class GEState : std::uint8_t { good, bad };

struct GEStep {
  bool lost;
  GEState next;
};

inline GEState ge_initial_state(const GEParams& ge, std::mt19937_64& rng) {
  return rand_unit(rng) < ge.stationary_bad() ? GEState::bad : GEState::good;
}

inline GEStep ge_step(GEState state, const GEParams& ge,
                      std::mt19937_64& rng) {
  GEStep out;
  const double deliver = state == GEState::good ? ge.k : ge.h;
  out.lost = rand_unit(rng) >= deliver;
  const double flip = state == GEState::good ? ge.p : ge.r;
  if (rand_unit(rng) < flip)
    out.next = state == GEState::good ? GEState::bad : GEState::good;
  else
    out.next = state;
  return out;
}

struct TraceEntry {
  std::uint16_t seq;
  std::uint8_t type;
  bool lost;
  char state;  // 'G', 'B', or '-' for uniform / exempt packets
};

struct LossTrace {
  std::uint64_t seed = 0;
  std::string model;
  std::vector<TraceEntry> entries;

  std::size_t payload_losses() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += (e.type == 1 && e.lost) ? 1 : 0;
    return n;
  }
  std::size_t payload_count() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.type == 1 ? 1 : 0;
    return n;
  }
};

struct LossResult {
  std::vector<Packet> delivered;
  LossTrace trace;
};

inline LossResult apply_loss(const std::vector<Packet>& packets,
                             const LossModel& model, std::uint64_t seed) {
  LossResult out;
  out.trace.seed = seed;
  out.trace.model = loss_spec_string(model);
  std::mt19937_64 rng(seed);
  const auto* ge = std::get_if<GEParams>(&model);
  GEState state = ge ? ge_initial_state(*ge, rng) : GEState::good;
  for (const auto& p : packets) {
    TraceEntry e{p.seq, p.type, false, '-'};
    if (p.type == 1) {
      if (ge) {
        e.state = state == GEState::good ? 'G' : 'B';
        const GEStep step = ge_step(state, *ge, rng);
        e.lost = step.lost;
        state = step.next;
      } else {
        e.lost = rand_unit(rng) < std::get<UniformParams>(model).pe;
      }
    }
    if (!e.lost) out.delivered.push_back(p);
    out.trace.entries.push_back(e);
  }
  return out;
}

// CSV trace: one row per packet per trace.
inline void write_trace_csv(std::ostream& os,
                            const std::vector<LossTrace>& traces) {
  os << "seed,model,seq,type,state,lost\n";
  for (const auto& t : traces)
    for (const auto& e : t.entries)
      os << t.seed << ',' << t.model << ',' << e.seq << ','
         << static_cast<int>(e.type) << ',' << e.state << ','
         << (e.lost ? 1 : 0) << '\n';
}

}  // namespace lrpc
