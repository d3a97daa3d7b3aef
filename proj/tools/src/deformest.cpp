// deformest: command-line front end for the deformation estimators.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>

#include "harness/config.hpp"
#include "harness/experiments.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::optional<std::string> out;
  std::optional<int> sim;
  std::optional<int> wavelet_k;
  std::optional<double> snr_db;
  std::optional<std::size_t> threads;
  std::vector<std::string> sets;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app->add_option("--seed", f.seed, "master seed");
  app->add_option("--runs", f.runs, "realizations per cell")->check(CLI::PositiveNumber);
  app->add_option("--out", f.out, "output directory");
  app->add_option("--sim", f.sim, "simulation (sine period L, L/2, L/4)")->check(CLI::IsMember({1, 2, 3}));
  app->add_option("--wavelet-k", f.wavelet_k, "wavelet degree")->check(CLI::IsMember({70, 25, 7}));
  app->add_option("--snr-db", f.snr_db, "signal-to-noise ratio in dB");
  app->add_option("--threads", f.threads, "worker threads (0: all cores)");
  app->add_option("--set", f.sets, "extra key=value override, repeatable");
}

harness::ExperimentConfig resolve(const CommonFlags& f, const std::string& scenario) {
  harness::ExperimentConfig c;
  c.scenario = scenario;
  if (!f.config_path.empty()) c = harness::load_config(f.config_path, c);
  // A config file may pick a demo flavour; the subcommand fixes the family.
  if (scenario == "table1" || scenario == "audio") c.scenario = scenario;
  else if (c.scenario != "warp-demo" && c.scenario != "modulation-demo") c.scenario = scenario;
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    c.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (f.seed) c.seed = *f.seed;
  if (f.runs) c.runs = *f.runs;
  if (f.out) c.out_dir = *f.out;
  if (f.sim) c.sims = {*f.sim};
  if (f.wavelet_k) c.wavelet_ks = {*f.wavelet_k};
  if (f.snr_db) c.snr_db = *f.snr_db;
  if (f.threads) c.threads = *f.threads;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Estimate modulation and time-warping deformations of stationary Gaussian signals"};
  app.set_version_flag("--version", harness::kVersion);
  app.require_subcommand(1);

  CommonFlags table_flags, demo_flags, audio_flags;
  auto* table1 = app.add_subcommand("table1", "Monte Carlo study of sine-warped band-pass noise");
  add_common(table1, table_flags);

  auto* demo = app.add_subcommand("demo", "single seeded run with plot-ready CSV output");
  add_common(demo, demo_flags);
  std::string demo_kind = "warp";
  demo->add_option("--kind", demo_kind, "warp or modulation")->check(CLI::IsMember({"warp", "modulation"}));

  auto* audio = app.add_subcommand("audio", "estimate the warp of a recording and stationarize it");
  add_common(audio, audio_flags);
  std::string input;
  audio->add_option("input", input, "input WAV (PCM 16/24-bit or float32)")->check(CLI::ExistingFile);

  auto* synth = app.add_subcommand("synth", "write a synthetic accelerating engine-like WAV");
  std::string synth_path = "engine.wav";
  std::size_t synth_length = 1u << 16;
  std::uint32_t synth_rate = 16000;
  double speedup = 1.0;
  std::uint64_t synth_seed = 1;
  synth->add_option("output", synth_path, "output WAV path");
  synth->add_option("--length", synth_length, "samples");
  synth->add_option("--rate", synth_rate, "sample rate in Hz");
  synth->add_option("--speedup", speedup, "relative clock speed increase over the file");
  synth->add_option("--seed", synth_seed, "seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*table1) {
      const auto cfg = resolve(table_flags, "table1");
      const auto report = harness::run_table1(cfg);
      const auto path = harness::write_table1(report);
      for (const auto& c : report.cells) {
        std::printf("sim %d k %d: proposed %.4f (+/- %.4f)  baseline %.4f (+/- %.4f)  runs %zu failed %zu\n", c.sim,
                    c.k, c.mean_proposed, c.ci95_proposed(), c.mean_baseline, c.ci95_baseline(), c.runs, c.failed);
      }
      std::printf("wrote %s (%.1f s)\n", path.c_str(), report.seconds);
    } else if (*demo) {
      auto cfg = resolve(demo_flags, demo_kind == "warp" ? "warp-demo" : "modulation-demo");
      cfg.scenario = demo_kind == "warp" ? "warp-demo" : "modulation-demo";
      const auto res = harness::run_demo(cfg);
      std::printf("%zu frames: proposed error %.4f, baseline error %.4f\n", res.frames, res.err_proposed,
                  res.err_baseline);
      for (const auto& f : res.files) std::printf("wrote %s\n", f.c_str());
    } else if (*audio) {
      auto flags = audio_flags;
      flags.sets.push_back("input=" + input);
      const auto cfg = resolve(flags, "audio");
      const auto res = harness::run_audio(cfg);
      std::printf("%zu samples: log local-scale variance %.3g -> %.3g\n", res.samples, res.local_scale_var_in,
                  res.local_scale_var_out);
      if (res.clipped > 0) std::printf("warning: %zu output samples clipped\n", res.clipped);
      for (const auto& f : res.files) std::printf("wrote %s\n", f.c_str());
    } else if (*synth) {
      harness::write_engine_wav(synth_path, synth_length, synth_rate, speedup, synth_seed);
      std::printf("wrote %s\n", synth_path.c_str());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
