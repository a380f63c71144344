#pragma once
// Experiment harness: encode each image once per coding variant, then sweep
// (preset x loss model x method) cells with seeded trials and report PSNR
// statistics, rate accounting and loss traces as CSV, plus optional SVG
// plots and per-packet progressive traces.
//
// Determinism contract: trial t of every cell uses seed master_seed + t, all
// aggregation runs in fixed configuration order, and floating-point output
// is printed with fixed formatting -- so reruns (at any --jobs value)
// produce byte-identical reports.

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lrpc/loss.hpp"
#include "lrpc/metrics.hpp"
#include "lrpc/pipeline.hpp"
#include "lrpc/receiver.hpp"
#include "lrpc/svg.hpp"

namespace lrpc {

struct MethodSpec {
  std::string name;
  bool rearrange = true;
  Concealment policy = Concealment::none;
};

// "<scr|noscr>+<interpolate|zero>"
inline MethodSpec parse_method(const std::string& name) {
  const auto plus = name.find('+');
  if (plus == std::string::npos)
    throw error("method '" + name + "' is not <scr|noscr>+<policy>");
  MethodSpec m;
  m.name = name;
  const std::string layout = name.substr(0, plus);
  if (layout == "scr")
    m.rearrange = true;
  else if (layout == "noscr")
    m.rearrange = false;
  else
    throw error("method layout '" + layout + "' is not scr or noscr");
  m.policy = parse_concealment(name.substr(plus + 1));
  return m;
}

struct ExperimentSpec {
  std::vector<std::pair<std::string, ImageBuffer>> images;  // id, pixels
  std::vector<std::string> presets = {"Q1", "Q2", "Q3"};
  std::vector<std::string> loss_specs = {"uniform:0.1"};
  std::vector<std::string> methods = {"scr+interpolate", "scr+zero",
                                      "noscr+zero"};
  std::size_t budget = kDefaultPacketBudget;
  int trials = 10;
  std::uint64_t seed = 1;
  int jobs = 1;
  bool progressive = false;
  std::map<std::string, double> lambda_override;  // preset name -> lambda
  std::string plots_dir;          // empty = no plots
  std::string traces_path;        // empty = no loss trace csv
  std::string progressive_path;   // empty = derive from progressive flag
};

struct CellStats {
  std::string image, preset, loss, method;
  int trials = 0;
  std::size_t payload_packets = 0;
  int paired = 1;
  double bpp_packet = 0, bpp_file = 0, base_share = 0, loss_rate = 0;
  double psnr_mean = 0, psnr_var = 0, psnr_min = 0, psnr_max = 0;
  double rd = 0;
  std::string trace_ref;
};

struct ProgressivePoint {
  std::string image, preset, method;
  int prefix = 0;       // payload packets received
  int channels = 0;     // cumulative channels covered
  double psnr_clean = 0, psnr_lossy = 0;
};

namespace detail {

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ",") + s;
  return out;
}

inline std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.') ? c : '_';
  return out;
}

struct TaskOutput {
  std::vector<CellStats> rows;
  std::vector<ProgressivePoint> progressive;
  std::vector<LossTrace> traces;
  std::vector<std::string> warnings;
  bool failed = false;
};

}  // namespace detail

// One (image, preset) worth of work; every cell and trace for it.
inline detail::TaskOutput run_task(const ExperimentSpec& spec,
                                   const std::string& image_id,
                                   const ImageBuffer& original,
                                   const std::string& preset_name) {
  detail::TaskOutput out;
  const QualityPreset& preset = preset_by_name(preset_name);
  double lambda = preset.lambda;
  if (auto it = spec.lambda_override.find(preset_name);
      it != spec.lambda_override.end())
    lambda = it->second;

  // Shared across methods: one encode per coding variant.
  struct Variant {
    EncodeResult enc;
    std::vector<Packet> packets;
    std::size_t wire_bytes = 0, base_bytes = 0, file_size = 0;
    std::size_t payload_packets = 0;
    bytes base_serialized;
  };
  std::map<bool, Variant> variants;  // key: rearrange
  for (const auto& mname : spec.methods) {
    const MethodSpec m = parse_method(mname);
    if (variants.count(m.rearrange)) continue;
    Variant v;
    v.enc = encode_image(original, preset, m.rearrange);
    v.file_size = file_bytes(v.enc).size();
    v.packets = packetize(v.enc, spec.budget);
    v.base_serialized = write_base(v.enc.base);
    for (const auto& p : v.packets) {
      v.wire_bytes += serialize_packet(p).size();
      if (p.type == 0)
        v.base_bytes += serialize_packet(p).size();
      else
        ++v.payload_packets;
    }
    variants.emplace(m.rearrange, std::move(v));
  }

  // The share is a property of the coding variant, not of the loss model or
  // concealment, so warn once per variant instead of once per report row.
  for (const auto& [rearranged, v] : variants) {
    const double share = static_cast<double>(v.base_bytes) / v.wire_bytes;
    if (share < 0.02 || share > 0.15)
      out.warnings.push_back(image_id + "/" + preset_name +
                             (rearranged ? "/rearranged" : "/flat") +
                             ": base-layer share " + detail::fixed6(share) +
                             " outside the expected [0.02, 0.15] band");
  }

  // paired = every configured method sees the same packet-plan shape, so one
  // seed gives the identical loss pattern everywhere.
  std::size_t first_count = 0;
  int paired = 1;
  bool first_set = false;
  for (const auto& mname : spec.methods) {
    const auto& v = variants.at(parse_method(mname).rearrange);
    if (!first_set) {
      first_count = v.payload_packets;
      first_set = true;
    } else if (v.payload_packets != first_count) {
      paired = 0;
    }
  }

  for (const auto& loss_name : spec.loss_specs) {
    const LossModel model = parse_loss_spec(loss_name);
    for (const auto& mname : spec.methods) {
      const MethodSpec m = parse_method(mname);
      const Variant& v = variants.at(m.rearrange);
      CellStats cs;
      cs.image = image_id;
      cs.preset = preset_name;
      cs.loss = loss_name;
      cs.method = mname;
      cs.trials = spec.trials;
      cs.payload_packets = v.payload_packets;
      cs.paired = paired;
      cs.bpp_packet = bits_per_pixel(v.wire_bytes, original.width,
                                     original.height);
      cs.bpp_file =
          bits_per_pixel(v.file_size, original.width, original.height);
      cs.base_share = static_cast<double>(v.base_bytes) / v.wire_bytes;

      std::vector<double> samples;
      samples.reserve(spec.trials);
      double mse_sum = 0, lost_sum = 0;
      double mn = 1e300, mx = -1e300;
      for (int t = 0; t < spec.trials; ++t) {
        const std::uint64_t trial_seed = spec.seed + static_cast<std::uint64_t>(t);
        LossResult lr = apply_loss(v.packets, model, trial_seed);
        lr.trace.model = loss_name;
        ImageBuffer rec =
            reconstruct(v.base_serialized, lr.delivered, m.policy);
        const double m2 = mse(original, rec);
        const double p = psnr_from_mse(m2);
        samples.push_back(p);
        mse_sum += m2;
        mn = std::min(mn, p);
        mx = std::max(mx, p);
        if (lr.trace.payload_count() > 0)
          lost_sum += static_cast<double>(lr.trace.payload_losses()) /
                      static_cast<double>(lr.trace.payload_count());
        if (!spec.traces_path.empty()) out.traces.push_back(lr.trace);
      }
      const int n = spec.trials;
      double sum = 0;
      for (double p : samples) sum += p;
      cs.psnr_mean = sum / n;
      // Deviations are taken from the first sample before squaring, so a
      // run of identical trials reports exactly zero variance.
      double dsum = 0, dsq = 0;
      for (double p : samples) {
        const double d = p - samples.front();
        dsum += d;
        dsq += d * d;
      }
      cs.psnr_var = n > 1 ? std::max(dsq - dsum * dsum / n, 0.0) / (n - 1) : 0.0;
      cs.psnr_min = mn;
      cs.psnr_max = mx;
      cs.loss_rate = lost_sum / n;
      cs.rd = rd_cost(cs.bpp_packet, mse_sum / n, lambda);
      cs.trace_ref = "seeds=" + std::to_string(spec.seed) + ".." +
                     std::to_string(spec.seed + spec.trials - 1);
      out.rows.push_back(std::move(cs));
    }
  }

  if (spec.progressive) {
    for (const auto& mname : spec.methods) {
      const MethodSpec m = parse_method(mname);
      const Variant& v = variants.at(m.rearrange);
      // One injected loss set, drawn once from the master seed.
      const LossModel model = parse_loss_spec(spec.loss_specs.front());
      const LossResult lr = apply_loss(v.packets, model, spec.seed);

      std::vector<Packet> clean, lossy;
      for (const auto& p : v.packets)
        if (p.type == 0) {
          clean.push_back(p);
          lossy.push_back(p);
        }
      std::size_t payload_idx = 0;
      for (const auto& p : v.packets) {
        if (p.type != 1) continue;
        clean.push_back(p);
        if (!lr.trace.entries[&p - v.packets.data()].lost) lossy.push_back(p);
        ++payload_idx;
        ProgressivePoint pt;
        pt.image = image_id;
        pt.preset = preset_name;
        pt.method = mname;
        pt.prefix = static_cast<int>(payload_idx);
        const int tail = static_cast<int>(p.channels.back()) + 1;
        pt.channels = tail;
        pt.psnr_clean = psnr(
            original, reconstruct(v.base_serialized, clean, m.policy, tail));
        pt.psnr_lossy = psnr(
            original, reconstruct(v.base_serialized, lossy, m.policy, tail));
        out.progressive.push_back(std::move(pt));
      }
    }
  }
  return out;
}

inline void write_experiment_csv(std::ostream& os, const ExperimentSpec& spec,
                                 const std::vector<CellStats>& rows) {
  std::vector<std::string> ids;
  for (const auto& [id, img] : spec.images) ids.push_back(id);
  os << "# progressive transmission experiment report\n";
  os << "# images=" << detail::join(ids) << "\n";
  os << "# presets=" << detail::join(spec.presets) << "\n";
  os << "# loss=" << detail::join(spec.loss_specs) << "\n";
  os << "# methods=" << detail::join(spec.methods) << "\n";
  // --jobs is deliberately not echoed: reports must be byte-identical at
  // any worker count.
  os << "# budget=" << spec.budget << " trials=" << spec.trials
     << " seed=" << spec.seed
     << " progressive=" << (spec.progressive ? 1 : 0) << "\n";
  for (const auto& [k, v] : spec.lambda_override)
    os << "# lambda_" << k << "=" << detail::fixed6(v) << "\n";
  os << "# psnr_var is the unbiased sample variance over trials (0 when "
        "trials < 2)\n";
  os << "# bpp_packet counts every transmitted byte incl. packet overhead; "
        "bpp_file counts the .lrpc file only\n";
  os << "image,preset,loss,method,trials,payload_packets,paired,bpp_packet,"
        "bpp_file,base_share,loss_rate,psnr_mean,psnr_var,psnr_min,psnr_max,"
        "rd_cost,trace_ref\n";
  for (const auto& r : rows)
    os << r.image << ',' << r.preset << ',' << r.loss << ',' << r.method
       << ',' << r.trials << ',' << r.payload_packets << ',' << r.paired
       << ',' << detail::fixed6(r.bpp_packet) << ','
       << detail::fixed6(r.bpp_file) << ',' << detail::fixed6(r.base_share)
       << ',' << detail::fixed6(r.loss_rate) << ','
       << detail::fixed6(r.psnr_mean) << ',' << detail::fixed6(r.psnr_var)
       << ',' << detail::fixed6(r.psnr_min) << ','
       << detail::fixed6(r.psnr_max) << ',' << detail::fixed6(r.rd) << ','
       << r.trace_ref << '\n';
}

inline void write_progressive_csv(std::ostream& os,
                                  const std::vector<ProgressivePoint>& pts) {
  os << "image,preset,method,prefix,channels,psnr_clean,psnr_lossy\n";
  for (const auto& p : pts)
    os << p.image << ',' << p.preset << ',' << p.method << ',' << p.prefix
       << ',' << p.channels << ',' << detail::fixed6(p.psnr_clean) << ','
       << detail::fixed6(p.psnr_lossy) << '\n';
}

namespace detail {

inline void write_plots(const ExperimentSpec& spec,
                        const std::vector<CellStats>& rows,
                        const std::vector<ProgressivePoint>& prog) {
  const std::vector<std::string> palette = {"#1f77b4", "#d62728", "#2ca02c",
                                            "#9467bd", "#ff7f0e", "#8c564b"};
  // Rate-distortion summary per loss model: corpus-mean PSNR vs corpus-mean
  // bpp at each preset, with min/max whiskers over images and trials.
  for (const auto& loss_name : spec.loss_specs) {
    Plot plot;
    plot.title = "PSNR vs rate under " + loss_name;
    plot.xlabel = "bits per pixel (packetized)";
    plot.ylabel = "PSNR (dB)";
    std::size_t color = 0;
    for (const auto& mname : spec.methods) {
      PlotSeries s;
      s.label = mname;
      s.color = palette[color++ % palette.size()];
      for (const auto& preset : spec.presets) {
        double bx = 0, by = 0, lo = 1e300, hi = -1e300;
        int n = 0;
        for (const auto& r : rows) {
          if (r.loss != loss_name || r.method != mname || r.preset != preset)
            continue;
          bx += r.bpp_packet;
          by += r.psnr_mean;
          lo = std::min(lo, r.psnr_min);
          hi = std::max(hi, r.psnr_max);
          ++n;
        }
        if (n == 0) continue;
        s.x.push_back(bx / n);
        s.y.push_back(by / n);
        s.ylo.push_back(lo);
        s.yhi.push_back(hi);
      }
      plot.series.push_back(std::move(s));
    }
    write_svg_plot(plot,
                   spec.plots_dir + "/rd_" + sanitize(loss_name) + ".svg");
  }
  // Progressive traces: one plot per (image, preset).
  std::vector<std::pair<std::string, std::string>> keys;
  for (const auto& p : prog) {
    std::pair<std::string, std::string> k{p.image, p.preset};
    bool seen = false;
    for (const auto& e : keys) seen = seen || e == k;
    if (!seen) keys.push_back(k);
  }
  for (const auto& [image, preset] : keys) {
    Plot plot;
    plot.title = "Progressive decode: " + image + " @ " + preset;
    plot.xlabel = "payload packets received";
    plot.ylabel = "PSNR (dB)";
    std::size_t color = 0;
    for (const auto& mname : spec.methods) {
      PlotSeries clean, lossy;
      clean.label = mname + " (clean)";
      lossy.label = mname + " (lossy)";
      clean.color = palette[color++ % palette.size()];
      lossy.color = palette[color++ % palette.size()];
      for (const auto& p : prog) {
        if (p.image != image || p.preset != preset || p.method != mname)
          continue;
        clean.x.push_back(p.prefix);
        clean.y.push_back(p.psnr_clean);
        lossy.x.push_back(p.prefix);
        lossy.y.push_back(p.psnr_lossy);
      }
      plot.series.push_back(std::move(clean));
      plot.series.push_back(std::move(lossy));
    }
    write_svg_plot(plot, spec.plots_dir + "/prog_" + sanitize(image) + "_" +
                             sanitize(preset) + ".svg");
  }
}

}  // namespace detail

struct ExperimentResult {
  std::vector<CellStats> rows;
  std::vector<ProgressivePoint> progressive;
  std::vector<LossTrace> traces;
  std::vector<std::string> warnings;
};

inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw error("trials must be at least 1");
  if (spec.images.empty()) throw error("no images configured");
  if (spec.loss_specs.empty()) throw error("no loss models configured");
  if (spec.methods.empty()) throw error("no methods configured");
  struct Task {
    std::size_t image_idx;
    std::string preset;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < spec.images.size(); ++i)
    for (const auto& preset : spec.presets) tasks.push_back({i, preset});

  // Loss-model advisories depend only on the spec, so they are emitted once
  // here rather than by every task.
  ExperimentResult result;
  for (const auto& loss_name : spec.loss_specs) {
    const std::string warn = loss_model_warning(parse_loss_spec(loss_name));
    if (!warn.empty()) result.warnings.push_back(loss_name + ": " + warn);
  }

  std::vector<detail::TaskOutput> outputs(tasks.size());
  const int jobs = std::max(1, spec.jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) break;
      const auto& t = tasks[i];
      try {
        outputs[i] = run_task(spec, spec.images[t.image_idx].first,
                              spec.images[t.image_idx].second, t.preset);
      } catch (const std::exception& e) {
        outputs[i].failed = true;
        outputs[i].warnings.push_back(spec.images[t.image_idx].first + "/" +
                                      t.preset + " failed: " + e.what());
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Deterministic gather in task order.
  for (auto& o : outputs) {
    for (auto& r : o.rows) result.rows.push_back(std::move(r));
    for (auto& p : o.progressive)
      result.progressive.push_back(std::move(p));
    for (auto& t : o.traces) result.traces.push_back(std::move(t));
    for (auto& w : o.warnings) result.warnings.push_back(std::move(w));
  }
  if (!spec.plots_dir.empty())
    detail::write_plots(spec, result.rows, result.progressive);
  return result;
}

}  // namespace lrpc
