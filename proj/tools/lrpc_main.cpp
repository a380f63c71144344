// lrpc command-line tool: encode / decode / pack / sim / experiment / trace.
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "lrpc/config.hpp"
#include "lrpc/experiment.hpp"
#include "lrpc/loss.hpp"
#include "lrpc/pipeline.hpp"
#include "lrpc/receiver.hpp"
#include "lrpc/synth.hpp"

namespace {

lrpc::bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lrpc::error("cannot open " + path);
  return lrpc::bytes(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const lrpc::bytes& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw lrpc::error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw lrpc::error("short write to " + path);
}

std::string basename_of(const std::string& path) {
  const auto slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

lrpc::ExperimentSpec load_experiment_spec(const std::string& config_path) {
  lrpc::ConfigReader cfg{lrpc::parse_config_file(config_path)};
  lrpc::ExperimentSpec spec;
  const auto image_paths = cfg.take_list("images", {});
  if (image_paths.empty())
    throw lrpc::error("config must list at least one image");
  for (const auto& p : image_paths)
    spec.images.emplace_back(basename_of(p), lrpc::load_image(p));
  spec.presets = cfg.take_list("presets", spec.presets);
  spec.loss_specs = cfg.take_list("loss", spec.loss_specs);
  spec.methods = cfg.take_list("methods", spec.methods);
  spec.budget = static_cast<std::size_t>(
      cfg.take_int("budget", static_cast<long>(spec.budget)));
  spec.trials = static_cast<int>(cfg.take_int("trials", spec.trials));
  spec.seed = static_cast<std::uint64_t>(
      cfg.take_int("seed", static_cast<long>(spec.seed)));
  spec.jobs = static_cast<int>(cfg.take_int("jobs", spec.jobs));
  spec.progressive = cfg.take_bool("progressive", spec.progressive);
  for (const auto& preset : {"Q1", "Q2", "Q3"}) {
    const std::string key = std::string("lambda_") + preset;
    if (cfg.has(key))
      spec.lambda_override[preset] = cfg.take_double(key, 0.0);
  }
  cfg.reject_leftovers();
  // Validate early so typos fail before any heavy work.
  for (const auto& p : spec.presets) lrpc::preset_by_name(p);
  for (const auto& l : spec.loss_specs) lrpc::parse_loss_spec(l);
  for (const auto& m : spec.methods) lrpc::parse_method(m);
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"loss-resilient progressive image transmission toolkit"};
  app.require_subcommand(1);

  // encode
  auto* encode = app.add_subcommand("encode", "compress an image to .lrpc");
  std::string enc_input, enc_output, enc_quality = "Q2";
  bool enc_no_scr = false;
  encode->add_option("image", enc_input, "input image (.ppm or .png)")
      ->required();
  encode->add_option("--quality", enc_quality, "quality preset Q1|Q2|Q3");
  encode->add_flag("--no-scr", enc_no_scr,
                   "disable the spatial-channel rearrangement");
  encode->add_option("-o,--output", enc_output, "output .lrpc path")
      ->required();

  // decode
  auto* decode = app.add_subcommand("decode", "decompress an .lrpc file");
  std::string dec_input, dec_output;
  decode->add_option("file", dec_input, "input .lrpc file")->required();
  decode->add_option("-o,--output", dec_output, "output image (.ppm or .png)")
      ->required();

  // pack
  auto* pack = app.add_subcommand("pack", "packetize an .lrpc file");
  std::string pack_input, pack_output;
  std::size_t pack_budget = lrpc::kDefaultPacketBudget;
  bool pack_verbose = false;
  pack->add_option("file", pack_input, "input .lrpc file")->required();
  pack->add_option("--bmax", pack_budget, "packet size budget in bytes");
  pack->add_option("-o,--output", pack_output, "output packet stream")
      ->required();
  pack->add_flag("-v,--verbose", pack_verbose, "print the plan to stderr");

  // sim
  auto* sim = app.add_subcommand(
      "sim", "simulate loss over a packed plan and emit traces");
  std::string sim_plan, sim_loss = "uniform:0.1", sim_out;
  std::uint64_t sim_seed = 1;
  int sim_trials = 1;
  sim->add_option("plan", sim_plan, "packet stream from 'pack'")->required();
  sim->add_option("--loss", sim_loss,
                  "loss model: uniform:<pe> or ge:<p>,<r>,<h>,<k>");
  sim->add_option("--seed", sim_seed, "master seed");
  sim->add_option("--trials", sim_trials, "number of seeded trials");
  sim->add_option("-o,--output", sim_out, "trace csv path (default stdout)");

  // trace
  auto* trace = app.add_subcommand(
      "trace", "emit a loss trace for a synthetic packet sequence");
  int trace_packets = 0;
  std::string trace_loss = "uniform:0.1", trace_out;
  std::uint64_t trace_seed = 1;
  int trace_trials = 1;
  trace->add_option("--packets", trace_packets, "payload packet count")
      ->required();
  trace->add_option("--loss", trace_loss, "loss model spec");
  trace->add_option("--seed", trace_seed, "master seed");
  trace->add_option("--trials", trace_trials, "number of seeded trials");
  trace->add_option("-o,--output", trace_out, "trace csv path (default stdout)");

  // experiment
  auto* experiment =
      app.add_subcommand("experiment", "run the evaluation harness");
  std::string exp_config, exp_csv, exp_plots, exp_traces, exp_progressive_csv;
  bool exp_progressive = false;
  int exp_jobs = 0;
  experiment->add_option("--config", exp_config, "flat key=value config file")
      ->required();
  experiment->add_option("--csv", exp_csv, "report csv path (default stdout)");
  experiment->add_option("--plots", exp_plots, "directory for svg plots");
  experiment->add_option("--traces", exp_traces, "loss trace csv path");
  experiment->add_flag("--progressive", exp_progressive,
                       "also emit per-packet progressive traces");
  experiment->add_option("--progressive-csv", exp_progressive_csv,
                         "progressive trace csv path");
  experiment->add_option("--jobs", exp_jobs,
                         "worker threads (overrides config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*encode) {
      const auto& preset = lrpc::preset_by_name(enc_quality);
      const lrpc::ImageBuffer img = lrpc::load_image(enc_input);
      const lrpc::EncodeResult er =
          lrpc::encode_image(img, preset, !enc_no_scr);
      write_file(enc_output, lrpc::file_bytes(er));
    } else if (*decode) {
      lrpc::save_image(lrpc::decode_file(read_file(dec_input)), dec_output);
    } else if (*pack) {
      const lrpc::bytes file = read_file(pack_input);
      const lrpc::LrpcFile parsed = lrpc::parse_lrpc(file);
      // Rebuild the sender-side view (latent + estimates) so the plan here
      // matches what the encoder itself would produce.
      const int lh =
          lrpc::round_up(parsed.base.height, lrpc::kPadMultiple) / lrpc::kBlock;
      const int lw =
          lrpc::round_up(parsed.base.width, lrpc::kPadMultiple) / lrpc::kBlock;
      const std::size_t plane = static_cast<std::size_t>(lh) * lw;
      std::vector<std::size_t> estimates(parsed.base.channels);
      std::vector<std::size_t> actual(parsed.base.channels);
      for (int c = 0; c < parsed.base.channels; ++c) {
        const auto values = lrpc::decode_channel(
            {parsed.payloads[c].data(), parsed.payloads[c].size()},
            parsed.base.scale_codes[c], plane);
        estimates[c] =
            lrpc::estimate_size(values, parsed.base.scale_codes[c]);
        actual[c] = parsed.payloads[c].size();
      }
      const lrpc::PacketPlan plan = lrpc::plan_packets(
          estimates, actual, pack_budget, parsed.base.rearranged);
      const auto packets = lrpc::build_packets(
          lrpc::write_base(parsed.base), plan, parsed.payloads, pack_budget);
      lrpc::bytes stream;
      for (const auto& p : packets) {
        const lrpc::bytes b = lrpc::serialize_packet(p);
        stream.insert(stream.end(), b.begin(), b.end());
      }
      write_file(pack_output, stream);
      if (pack_verbose) {
        for (const auto& p : packets) {
          std::cerr << "seq " << p.seq << " type " << int(p.type) << " size "
                    << p.serialized_size();
          if (!p.channels.empty())
            std::cerr << " channels " << p.channels.front() << ".."
                      << p.channels.back();
          std::cerr << "\n";
        }
      }
    } else if (*sim) {
      const auto packets = lrpc::parse_packet_stream(read_file(sim_plan));
      const lrpc::LossModel model = lrpc::parse_loss_spec(sim_loss);
      const std::string warn = lrpc::loss_model_warning(model);
      if (!warn.empty()) std::cerr << "warning: " << warn << "\n";
      std::vector<lrpc::LossTrace> traces;
      for (int t = 0; t < sim_trials; ++t)
        traces.push_back(
            lrpc::apply_loss(packets, model, sim_seed + t).trace);
      if (sim_out.empty()) {
        lrpc::write_trace_csv(std::cout, traces);
      } else {
        std::ofstream os(sim_out);
        if (!os) throw lrpc::error("cannot open " + sim_out);
        lrpc::write_trace_csv(os, traces);
      }
    } else if (*trace) {
      if (trace_packets < 1)
        throw lrpc::error("--packets must be at least 1");
      std::vector<lrpc::Packet> packets(trace_packets);
      for (int i = 0; i < trace_packets; ++i) {
        packets[i].type = 1;
        packets[i].seq = static_cast<std::uint16_t>(i);
      }
      const lrpc::LossModel model = lrpc::parse_loss_spec(trace_loss);
      std::vector<lrpc::LossTrace> traces;
      for (int t = 0; t < trace_trials; ++t)
        traces.push_back(
            lrpc::apply_loss(packets, model, trace_seed + t).trace);
      if (trace_out.empty()) {
        lrpc::write_trace_csv(std::cout, traces);
      } else {
        std::ofstream os(trace_out);
        if (!os) throw lrpc::error("cannot open " + trace_out);
        lrpc::write_trace_csv(os, traces);
      }
    } else if (*experiment) {
      lrpc::ExperimentSpec spec = load_experiment_spec(exp_config);
      if (exp_jobs > 0) spec.jobs = exp_jobs;
      if (exp_progressive) spec.progressive = true;
      spec.plots_dir = exp_plots;
      spec.traces_path = exp_traces;
      if (!exp_progressive_csv.empty()) {
        spec.progressive = true;
        spec.progressive_path = exp_progressive_csv;
      } else if (spec.progressive && !exp_csv.empty()) {
        spec.progressive_path = exp_csv + ".progressive.csv";
      }
      const lrpc::ExperimentResult result = lrpc::run_experiment(spec);
      for (const auto& w : result.warnings)
        std::cerr << "warning: " << w << "\n";
      if (exp_csv.empty()) {
        lrpc::write_experiment_csv(std::cout, spec, result.rows);
      } else {
        std::ofstream os(exp_csv);
        if (!os) throw lrpc::error("cannot open " + exp_csv);
        lrpc::write_experiment_csv(os, spec, result.rows);
      }
      if (spec.progressive && !spec.progressive_path.empty()) {
        std::ofstream os(spec.progressive_path);
        if (!os) throw lrpc::error("cannot open " + spec.progressive_path);
        lrpc::write_progressive_csv(os, result.progressive);
      } else if (spec.progressive) {
        lrpc::write_progressive_csv(std::cout, result.progressive);
      }
      if (!spec.traces_path.empty()) {
        std::ofstream os(spec.traces_path);
        if (!os) throw lrpc::error("cannot open " + spec.traces_path);
        lrpc::write_trace_csv(os, result.traces);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
