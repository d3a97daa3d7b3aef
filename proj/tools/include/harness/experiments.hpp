#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "deform/signal.hpp"
#include "harness/config.hpp"

namespace harness {

inline constexpr const char* kVersion = "deform 0.3.0";

/// Unit-variance analytic band-pass spectrum, flat between lo and hi with
/// raised-sine edges of width `taper` in ln f.
deform::PowerSpectrum log_bandpass_spectrum(std::size_t length, double lo, double hi, double taper);

/// Same, with edges of width `taper` in linear frequency.
deform::PowerSpectrum linear_bandpass_spectrum(std::size_t length, double lo, double hi, double taper);

/// Sine warp gamma'(t) = 1 + A sin(2 pi p t / L), gamma(0) = 0; simulation s
/// uses p = 1, 2, 4 for s = 1, 2, 3.
deform::DeformationFunction sine_warp(std::size_t length, int sim, double amplitude);

/// Sinusoidal modulation with peak frequency offset `amplitude` cycles per
/// sample, in DFT-bin units.
deform::DeformationFunction sine_modulation(std::size_t length, double amplitude);

struct Table1Row {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  int sim = 1;
  int k = 70;
  double err_proposed = 0.0;
  double err_baseline = 0.0;
  std::size_t iters = 0;
  bool converged = false;
  std::string error;  // non-empty when the estimator threw
};

struct CellSummary {
  int sim = 1;
  int k = 70;
  std::size_t runs = 0;
  std::size_t failed = 0;
  std::size_t converged = 0;
  double mean_proposed = 0.0;
  double var_proposed = 0.0;
  double mean_baseline = 0.0;
  double var_baseline = 0.0;
  double mean_iters = 0.0;

  /// Half-width of the normal-approximation 95% confidence interval.
  double ci95_proposed() const;
  double ci95_baseline() const;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<Table1Row> rows;
  std::vector<CellSummary> cells;
  double seconds = 0.0;
};

/// Every requested (sim, k) cell. Realization r of simulation s uses the same
/// source and noise for every k, so k comparisons are paired.
RunReport run_table1(const ExperimentConfig& config);

/// CSV text for a table1 report: per-run rows then `mean` and `variance`
/// footer rows per cell (run column holds the label, seed column is empty).
std::string table1_csv(const RunReport& report);

/// report.json text: config echo, version, seed, per-cell summaries, timing.
std::string report_json(const RunReport& report);

/// Writes table1.csv and report.json under config.out_dir; returns the CSV path.
std::string write_table1(const RunReport& report);

struct DemoResult {
  std::vector<std::string> files;
  double err_proposed = 0.0;
  double err_baseline = 0.0;
  std::size_t frames = 0;
  double seconds = 0.0;
};

/// Single seeded run. Writes transform.csv (magnitude grid, one row per
/// frame), truth.csv, baseline.csv and estimate.csv (frame, time, value),
/// plus report.json.
DemoResult run_demo(const ExperimentConfig& config);

struct AudioResult {
  std::vector<std::string> files;
  std::size_t samples = 0;
  std::size_t clipped = 0;
  double local_scale_var_in = 0.0;
  double local_scale_var_out = 0.0;
  double seconds = 0.0;
};

/// Estimates the warp of config.input, writes gamma.csv (t, gamma, gamma')
/// and the stationarized stationarized.wav, plus report.json.
AudioResult run_audio(const ExperimentConfig& config);

/// Synthetic engine-like recording: band-pass noise warped by a smooth
/// accelerating clock, written as 16-bit PCM. Returns the true warp.
deform::DeformationFunction write_engine_wav(const std::string& path, std::size_t length,
                                             std::uint32_t sample_rate, double speedup, std::uint64_t seed);

/// Variance of log local scale over the interior frames (edges trimmed by
/// `trim` frames) of the k-wavelet transform of x; a flatness measure.
double local_scale_log_variance(const deform::Signal& x, int wavelet_k, std::size_t hop, std::size_t trim);

}  // namespace harness
