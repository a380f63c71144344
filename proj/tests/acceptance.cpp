// Acceptance gate: ten numbered end-to-end checks, one pass/fail line each.
// Run with --criterion N for a single check, or with no arguments for all.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lrpc/experiment.hpp"
#include "lrpc/pipeline.hpp"
#include "lrpc/receiver.hpp"
#include "lrpc/synth.hpp"

using namespace lrpc;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void note(const std::string& what) {
    if (detail.empty()) detail = what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Shared evaluation corpus: eight deterministic full-size test scenes for
// rate measurements, plus the same scenes at transmission size. Packet-path
// checks use the smaller renders because a frequency-grouped channel of a
// full-size image (one coefficient per 8x8 block, 6144 blocks) outgrows the
// 900-byte packet ceiling no matter the preset; 288x224 keeps the largest
// channel of either layout safely inside one packet at every preset.
const std::vector<std::pair<std::string, ImageBuffer>>& corpus() {
  static const auto images = [] {
    std::vector<std::pair<std::string, ImageBuffer>> out;
    for (int i = 0; i < 8; ++i)
      out.emplace_back("scene" + std::to_string(i), make_test_image(i));
    return out;
  }();
  return images;
}

const std::vector<std::pair<std::string, ImageBuffer>>& packet_corpus() {
  static const auto images = [] {
    std::vector<std::pair<std::string, ImageBuffer>> out;
    for (int i = 0; i < 8; ++i)
      out.emplace_back("scene" + std::to_string(i),
                       make_test_image(i, 288, 224));
    return out;
  }();
  return images;
}

const std::vector<std::string> kPresetNames = {"Q1", "Q2", "Q3"};
const std::vector<std::string> kMethodNames = {"scr+interpolate", "scr+zero",
                                               "noscr+zero"};

// 1. Channel-model stationary loss rates hit the published 10% / 15%
//    operating points, in closed form and by simulation.
Outcome criterion1() {
  Outcome o;
  const GEParams ten{0.378, 0.883, 0.810, 0.938};
  const GEParams fifteen{0.417, 0.973, 0.620, 0.948};
  const double c10 = expected_loss_rate(ten);
  const double c15 = expected_loss_rate(fifteen);
  if (std::abs(c10 - 0.1004) > 1e-4)
    o.fail("closed form 10% set gave " + fmt("%.6f", c10));
  if (std::abs(c15 - 0.1504) > 1e-4)
    o.fail("closed form 15% set gave " + fmt("%.6f", c15));

  for (const auto& [ge, target] :
       {std::pair{ten, c10}, std::pair{fifteen, c15}}) {
    std::mt19937_64 rng(424242);
    GEState state = ge_initial_state(ge, rng);
    std::size_t losses = 0;
    const std::size_t steps = 1'000'000;
    for (std::size_t t = 0; t < steps; ++t) {
      const GEStep s = ge_step(state, ge, rng);
      losses += s.lost ? 1 : 0;
      state = s.next;
    }
    const double mc = static_cast<double>(losses) / steps;
    if (std::abs(mc - target) > 0.003)
      o.fail("simulated rate " + fmt("%.4f", mc) + " vs " +
             fmt("%.4f", target));
  }
  o.note("closed form " + fmt("%.4f", c10) + " / " + fmt("%.4f", c15) +
         ", simulation within 0.003");
  return o;
}

// 2. The channel rearrangement is a perfect involution pair over all small
//    shapes and on 1000 random full-size latents.
Outcome criterion2() {
  Outcome o;
  std::mt19937_64 rng(7);
  for (int c : {4, 8})
    for (int h : {2, 4, 6})
      for (int w : {2, 4, 6}) {
        Latent x(c, h, w);
        for (auto& v : x.values)
          v = static_cast<std::int16_t>(static_cast<int>(rng() % 511) - 255);
        if (scr_inverse(scr_forward(x)).values != x.values)
          o.fail("round trip failed at C=" + std::to_string(c) + " " +
                 std::to_string(h) + "x" + std::to_string(w));
      }
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Latent x(192, 64, 96);
    for (auto& v : x.values)
      v = static_cast<std::int16_t>(static_cast<int>(rng() % 511) - 255);
    if (scr_inverse(scr_forward(x)).values != x.values) ++failures;
  }
  if (failures > 0)
    o.fail(std::to_string(failures) + " of 1000 full-size round trips broke");
  o.note("18 small shapes exhaustive + 1000 random 192x64x96 latents");
  return o;
}

// 3. Losing one rearranged channel costs every channel of its window of four
//    exactly a quarter of its elements, and nothing outside the window.
Outcome criterion3() {
  Outcome o;
  for (int h : {2, 4, 8})
    for (int w : {2, 4, 8})
      for (int channels : {4, 8})
        for (int s = 0; s < channels; ++s) {
          ChannelMask mask(channels, true);
          mask.set(s, false);
          const ElementMask known = mask_inverse(mask, h, w);
          const int plane = h * w;
          for (int c = 0; c < channels; ++c) {
            int unknown = 0;
            for (int i = 0; i < plane; ++i)
              unknown += known.channel(c)[i] ? 0 : 1;
            const bool same_quad = c / kQuadSize == s / kQuadSize;
            const int want = same_quad ? plane / 4 : 0;
            if (unknown != want)
              o.fail("lost " + std::to_string(s) + " at " +
                     std::to_string(h) + "x" + std::to_string(w) +
                     ": channel " + std::to_string(c) + " lost " +
                     std::to_string(unknown) + "/" + std::to_string(plane));
          }
        }
  o.note("all single losses, h,w in {2,4,8}, windows of 4 and 8 channels");
  return o;
}

// 4. Packet planning: the two hand-traced plans, then 10^4 random size
//    vectors keeping every packet under budget with exact channel coverage
//    and the window-boundary rule on multi-channel non-final packets.
Outcome criterion4() {
  Outcome o;
  {
    const std::vector<std::size_t> sizes(4, 300);
    const auto plan = plan_packets(sizes, sizes, 920, false);
    if (plan.groups != std::vector<std::vector<int>>{{0, 1, 2}, {3}})
      o.fail("300x4 @920 plan mismatch");
  }
  {
    const std::vector<std::size_t> sizes(4, 400);
    const auto plan = plan_packets(sizes, sizes, 900, true);
    if (plan.groups != std::vector<std::vector<int>>{{0, 1}, {2}, {3}})
      o.fail("400x4 @900 rearranged plan mismatch");
  }
  std::mt19937_64 rng(1312);
  const std::size_t budget = 900;
  for (int trial = 0; trial < 10'000 && o.pass; ++trial) {
    const int channels = 1 + static_cast<int>(rng() % 256);
    std::vector<std::size_t> actual(channels);
    for (auto& s : actual) s = rng() % 880;
    std::vector<std::size_t> estimated = actual;
    if (trial % 3 == 1)
      for (auto& s : estimated) s = (s * (rng() % 200)) / 100;
    else if (trial % 3 == 2)
      for (auto& s : estimated) s = rng() % 880;
    const bool rearranged = (trial & 1) != 0;
    const auto plan = plan_packets(estimated, actual, budget, rearranged);

    int expect = 0;
    for (std::size_t g = 0; g < plan.groups.size(); ++g) {
      const auto& grp = plan.groups[g];
      if (grp.empty()) o.fail("empty packet");
      std::size_t wire = packet_overhead(grp.size());
      for (int c : grp) {
        if (c != expect++) o.fail("coverage broke at trial " +
                                  std::to_string(trial));
        wire += actual[c];
      }
      if (wire > budget)
        o.fail("packet of " + std::to_string(wire) + " bytes at trial " +
               std::to_string(trial));
      if (rearranged && g + 1 < plan.groups.size() && grp.size() >= 2 &&
          (grp.back() + 1) % 4 == 0)
        o.fail("multi-channel packet ends on a window boundary at trial " +
               std::to_string(trial));
    }
    if (expect != channels) o.fail("channels dropped or duplicated");
  }
  o.note("2 hand-traced fixtures + 10000 random size vectors");
  return o;
}

// 5. Entropy coding: exact round trip over 10^4 random channels across the
//    whole scale range; model-matched data stays within 2% + 16 bytes of its
//    model-ideal size.
Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(9001);
  int checked = 0;
  for (int trial = 0; trial < 10'000 && o.pass; ++trial) {
    const std::uint8_t code = static_cast<std::uint8_t>(1 + trial % 255);
    const std::size_t n = 1 + rng() % 3000;
    std::vector<std::int16_t> values(n);
    const int spread = 1 + static_cast<int>(rng() % 255);
    for (auto& v : values)
      v = static_cast<std::int16_t>(
          static_cast<int>(rng() % (2 * spread + 1)) - spread);
    const bytes payload = encode_channel(values, code);
    const auto back =
        decode_channel({payload.data(), payload.size()}, code, n);
    if (back != values) o.fail("round trip broke at trial " +
                               std::to_string(trial));
    ++checked;
  }

  double worst_overhead = 0.0;
  for (int code = 100; code <= 220 && o.pass; code += 20) {
    const SymbolModel model =
        SymbolModel::from_code(static_cast<std::uint8_t>(code));
    std::vector<std::int16_t> values(6144);
    for (auto& v : values) {
      const std::uint32_t f = static_cast<std::uint32_t>(rng() % kFreqTotal);
      v = static_cast<std::int16_t>(SymbolModel::value_of(model.lookup(f)));
    }
    const double ideal =
        cross_entropy_bits(values, model) / 8.0;
    const double actual = static_cast<double>(
        encode_channel(values, static_cast<std::uint8_t>(code)).size());
    worst_overhead = std::max(worst_overhead, actual - ideal);
    if (actual > ideal * 1.02 + 16.0)
      o.fail("code " + std::to_string(code) + ": " + fmt("%.1f", actual) +
             " bytes vs ideal " + fmt("%.1f", ideal));
  }
  o.note(std::to_string(checked) + " random channels, worst overhead " +
         fmt("%.1f", worst_overhead) + " bytes on model-matched data");
  return o;
}

// 6. With every packet delivered, the packetized receive path is
//    bit-identical to decoding the file directly, with and without
//    rearrangement, for every corpus image and preset.
Outcome criterion6() {
  Outcome o;
  for (const auto& [id, img] : packet_corpus()) {
    for (const auto& pname : kPresetNames) {
      for (bool rearrange : {true, false}) {
        const EncodeResult er =
            encode_image(img, preset_by_name(pname), rearrange);
        const ImageBuffer direct = decode_file(file_bytes(er));
        const ImageBuffer via = reconstruct(
            write_base(er.base), packetize(er, kDefaultPacketBudget),
            Concealment::interpolate);
        if (via.rgb != direct.rgb)
          o.fail(id + "/" + pname + (rearrange ? "/scr" : "/flat") +
                 " differs");
      }
    }
  }
  o.note("8 images x 3 presets x both layouts, byte-for-byte");
  return o;
}

// PSNR in the padded working colour planes, where the quantizer acts.
double plane_psnr(const PlaneSet& a, const PlaneSet& b) {
  double acc = 0.0;
  std::size_t n = 0;
  for (int p = 0; p < kPlanes; ++p) {
    for (std::size_t i = 0; i < a[p].size(); ++i) {
      const double d = a[p][i] - b[p][i];
      acc += d * d;
    }
    n += a[p].size();
  }
  return psnr_from_mse(acc / static_cast<double>(n));
}

// 7. Pure progressive refinement: with no loss, quality never decreases as
//    packets accumulate, for every corpus image and preset. Measured in the
//    working colour planes: there each received channel replaces a missing
//    coefficient by its midtread-quantized value, which is never farther from
//    the truth, so the inequality is exact. After conversion to 8-bit RGB it
//    genuinely is not -- the colour transform is not orthogonal, so errors in
//    different planes can cancel in RGB, and refining one plane can unmask
//    the error of another.
Outcome criterion7() {
  Outcome o;
  for (const auto& [id, img] : packet_corpus()) {
    const PlaneSet reference = image_planes(img);
    for (const auto& pname : kPresetNames) {
      const QualityPreset& preset = preset_by_name(pname);
      const EncodeResult er = encode_image(img, preset, true);
      const bytes base_bytes = write_base(er.base);
      const auto packets = packetize(er, kDefaultPacketBudget);
      std::vector<Packet> prefix;
      for (const auto& p : packets)
        if (p.type == 0) prefix.push_back(p);

      double prev = plane_psnr(
          reference,
          synthesis_planes(
              reconstruct_latent(base_bytes, prefix, Concealment::none, 0)
                  .latent,
              preset));
      for (const auto& p : packets) {
        if (p.type != 1) continue;
        prefix.push_back(p);
        const int tail = static_cast<int>(p.channels.back()) + 1;
        const double cur = plane_psnr(
            reference,
            synthesis_planes(reconstruct_latent(base_bytes, prefix,
                                                Concealment::none, tail)
                                 .latent,
                             preset));
        if (cur < prev)
          o.fail(id + "/" + pname + ": " + fmt("%.6f", prev) + " -> " +
                 fmt("%.6f", cur) + " dB at " +
                 std::to_string(prefix.size()) + " packets");
        prev = cur;
      }
    }
  }
  if (o.pass)
    o.note(
        "working-plane PSNR non-decreasing across every prefix, 8 images x 3 "
        "presets");
  return o;
}

// 8. Under 10% and 20% random loss, rearrangement plus interpolation beats
//    rearrangement with zero-fill (strictly, in corpus mean), which is no
//    worse than the flat layout with zero-fill; interpolation also shows the
//    smaller corpus-average variance.
//
//    The middle leg is structurally doubtful for mean PSNR, and the check is
//    kept strict anyway. With zero-fill, every latent cell rides in exactly
//    one packet under either layout, so both lose the same expected
//    coefficient energy and the expected MSE is equal. Mean PSNR is a mean
//    of negative logs of per-trial MSE, which rewards a layout that
//    concentrates damage in a few disastrous trials (flat: most losses drop
//    only high frequencies) over one that spreads the same damage across all
//    trials (rearranged: every loss punches holes in low frequencies). The
//    rearrangement pays off through interpolation -- three of four window
//    members survive for every hole -- and through trial-to-trial
//    predictability, not through zero-fill means.
Outcome criterion8() {
  Outcome o;
  ExperimentSpec spec;
  spec.images = packet_corpus();
  spec.presets = kPresetNames;
  spec.loss_specs = {"uniform:0.1", "uniform:0.2"};
  spec.methods = kMethodNames;
  spec.trials = 10;
  spec.seed = 1000;
  spec.jobs = static_cast<int>(
      std::max(1u, std::thread::hardware_concurrency()));
  const ExperimentResult res = run_experiment(spec);

  bool interp_above_flat = true;
  bool var_below_flat = true;
  for (const auto& pname : kPresetNames) {
    for (const auto& loss : spec.loss_specs) {
      double mean[3] = {0, 0, 0}, var[3] = {0, 0, 0};
      int n = 0;
      for (const auto& r : res.rows) {
        if (r.preset != pname || r.loss != loss) continue;
        for (int m = 0; m < 3; ++m)
          if (r.method == kMethodNames[m]) {
            mean[m] += r.psnr_mean;
            var[m] += r.psnr_var;
            if (m == 0) ++n;
          }
      }
      if (n == 0) {
        o.fail("no rows for " + pname + " " + loss);
        continue;
      }
      for (int m = 0; m < 3; ++m) {
        mean[m] /= n;
        var[m] /= n;
      }
      const std::string tag = pname + " @ " + loss + ": ";
      if (!(mean[0] > mean[1]))
        o.fail(tag + "interpolate " + fmt("%.4f", mean[0]) +
               " not above zero-fill " + fmt("%.4f", mean[1]));
      if (!(mean[1] >= mean[2]))
        o.fail(tag + "rearranged zero-fill " + fmt("%.4f", mean[1]) +
               " below flat zero-fill " + fmt("%.4f", mean[2]) +
               " (interpolate " + fmt("%.4f", mean[0]) + ")");
      if (!(var[0] <= var[2]))
        o.fail(tag + "interpolate variance " + fmt("%.4f", var[0]) +
               " above flat variance " + fmt("%.4f", var[2]));
      interp_above_flat = interp_above_flat && mean[0] > mean[2];
      var_below_flat = var_below_flat && var[0] <= var[2];
    }
  }
  if (!o.pass && interp_above_flat && var_below_flat)
    o.fail(
        "note: rearranged+interpolate still beats flat zero-fill in mean and "
        "variance at every setting; only the zero-fill middle leg inverts, as "
        "the comment above this check explains");
  if (o.pass)
    o.note("ordering holds at all 3 presets x {10%, 20%} loss, 10 paired "
           "trials, 8 images");
  return o;
}

// 9. Operating points: each preset lands inside [0.08, 0.45] bits per pixel
//    on the full-size corpus, and the protected header layer stays within
//    2-15% of the file bytes.
Outcome criterion9() {
  Outcome o;
  double lo_bpp = 1e9, hi_bpp = 0, lo_share = 1e9, hi_share = 0;
  for (const auto& [id, img] : corpus()) {
    for (const auto& pname : kPresetNames) {
      const EncodeResult er = encode_image(img, preset_by_name(pname), true);
      const std::size_t file_size = file_bytes(er).size();
      const double file_bpp =
          bits_per_pixel(file_size, img.width, img.height);
      lo_bpp = std::min(lo_bpp, file_bpp);
      hi_bpp = std::max(hi_bpp, file_bpp);
      if (file_bpp < 0.08 || file_bpp > 0.45)
        o.fail(id + "/" + pname + ": " + fmt("%.3f", file_bpp) + " bpp");

      const double share =
          static_cast<double>(write_base(er.base).size()) / file_size;
      lo_share = std::min(lo_share, share);
      hi_share = std::max(hi_share, share);
      if (share < 0.02 || share > 0.15)
        o.fail(id + "/" + pname + ": header share " + fmt("%.3f", share));
    }
  }
  o.note("bpp spans " + fmt("%.3f", lo_bpp) + ".." + fmt("%.3f", hi_bpp) +
         ", header share " + fmt("%.3f", lo_share) + ".." +
         fmt("%.3f", hi_share));
  return o;
}

// 10. The experiment report is byte-identical across reruns and across
//     worker counts.
Outcome criterion10() {
  Outcome o;
  ExperimentSpec spec;
  spec.images.emplace_back("a", make_test_image(0, 256, 192));
  spec.images.emplace_back("b", make_test_image(1, 256, 192));
  spec.presets = {"Q1", "Q3"};
  spec.loss_specs = {"uniform:0.2", "ge:0.378,0.883,0.810,0.938"};
  spec.methods = kMethodNames;
  spec.trials = 4;
  spec.seed = 77;
  spec.progressive = true;

  auto report = [&spec](int jobs) {
    ExperimentSpec s = spec;
    s.jobs = jobs;
    const ExperimentResult res = run_experiment(s);
    std::ostringstream csv, prog;
    write_experiment_csv(csv, s, res.rows);
    write_progressive_csv(prog, res.progressive);
    return csv.str() + "\n--\n" + prog.str();
  };

  const std::string serial = report(1);
  if (report(1) != serial) o.fail("rerun at one worker differs");
  if (report(4) != serial) o.fail("four workers differ from one");
  if (report(3) != serial) o.fail("three workers differ from one");
  o.note("identical reports at 1, 3 and 4 workers across reruns");
  return o;
}

using CriterionFn = Outcome (*)();

struct Criterion {
  int id;
  const char* name;
  CriterionFn fn;
};

const Criterion kCriteria[] = {
    {1, "channel model stationary loss rates", criterion1},
    {2, "rearrangement bijectivity", criterion2},
    {3, "single-loss quarter-spread accounting", criterion3},
    {4, "packet planning fixtures and properties", criterion4},
    {5, "entropy coder round trip and size bounds", criterion5},
    {6, "lossless packetized-vs-file identity", criterion6},
    {7, "progressive quality monotonicity", criterion7},
    {8, "loss-resilience method ordering", criterion8},
    {9, "preset operating points and header share", criterion9},
    {10, "report determinism across workers", criterion10},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > 10) {
    std::fprintf(stderr, "criterion must be 1..10\n");
    return 2;
  }
  bool all_pass = true;
  for (const auto& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    const Outcome o = c.fn();
    std::printf("criterion %2d [%s] %s%s%s\n", c.id, o.pass ? "PASS" : "FAIL",
                c.name, o.detail.empty() ? "" : ": ", o.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
