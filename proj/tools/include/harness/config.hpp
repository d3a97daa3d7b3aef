#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "deform/estimators.hpp"

namespace harness {

/// Every tunable of the harness. Loaded from a flat `key = value` file and
/// then overridden by command-line flags.
struct ExperimentConfig {
  std::string scenario = "table1";  // table1 | warp-demo | modulation-demo | audio
  std::uint64_t seed = 1;
  std::size_t runs = 100;
  std::string out_dir = "out";
  std::size_t threads = 0;  // 0: hardware concurrency
  double snr_db = 20.0;

  // Warp experiments (table1, warp-demo, audio).
  std::size_t length = 16384;
  std::vector<int> sims{1, 2, 3};       // sine period L / p with p = 1, 2, 4
  std::vector<int> wavelet_ks{70, 25, 7};
  double warp_amplitude = 0.3;          // gamma'(t) = 1 + A sin(2 pi p t / L)
  double band_lo = 1.0 / 32.0;          // source band, cycles per sample
  double band_hi = 1.0 / 8.0;
  double band_taper = 0.1;              // raised-sine edge width in ln f
  std::size_t hop = 64;
  int voices = 70;                      // scale rows per octave
  std::size_t scale_rows = 280;
  int max_fine_shift = 70;

  // Modulation experiments.
  std::size_t mod_length = 4096;
  double mod_amplitude = 0.03;          // peak frequency offset, cycles per sample
  double mod_band_lo = 0.18;
  double mod_band_hi = 0.32;
  double mod_band_taper = 0.01;         // linear frequency
  std::size_t mod_hop = 16;
  double mod_window_std = 32.0;
  std::size_t mod_stride = 16;          // 0: automatic (K_g rule)
  int mod_max_shift = 256;              // bins

  // Estimator.
  double epsilon = 0.02;
  std::size_t max_iters = 20;
  std::string noise_mode = "estimate";  // estimate | known
  std::size_t stride = 0;               // warp coarse stride, 0: automatic

  // Audio.
  std::string input;
  std::size_t audio_max_length = 1u << 18;

  /// Applies one key. Throws std::invalid_argument for unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  void validate() const;

  /// Ordered key/value echo of every field (for reports).
  std::map<std::string, std::string> to_map() const;

  /// Noise variance for a unit-variance source at snr_db.
  double sigma0_sq() const;

  deform::EstimatorConfig warp_estimator(int wavelet_k) const;
  deform::EstimatorConfig modulation_estimator() const;
};

/// Parses `key = value` lines; `#` starts a comment; blank lines are ignored.
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

}  // namespace harness
