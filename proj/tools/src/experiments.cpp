#include "harness/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <json.hpp>
#include <numeric>
#include <stdexcept>

#include "deform/deformation.hpp"
#include "deform/estimators.hpp"
#include "deform/parallel.hpp"
#include "deform/random.hpp"
#include "deform/wavelet.hpp"
#include "harness/wav.hpp"

namespace harness {

using deform::DeformationKind;
using deform::RVector;
using deform::Signal;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Raised-sine step: 0 below -w/2, 1 above w/2.
double edge(double x, double w) {
  const double e = std::clamp(x / w + 0.5, 0.0, 1.0);
  const double s = std::sin(0.5 * deform::kPi * e);
  return s * s;
}

deform::PowerSpectrum normalized(RVector S) {
  const double total = std::accumulate(S.begin(), S.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("band-pass spectrum is empty at this length");
  for (double& v : S) v /= total;
  return deform::PowerSpectrum(std::move(S));
}

std::string fixed(double v, int digits = 6) {
  if (!std::isfinite(v)) return "nan";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? std::numeric_limits<double>::quiet_NaN() : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double var_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

// Estimate aligned to the truth within the affine class.
RVector align(const RVector& truth, const RVector& est, DeformationKind kind) {
  RVector out(est.size());
  if (kind == DeformationKind::warp) {
    double ge = 0.0, ee = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
      ge += truth[i] * est[i];
      ee += est[i] * est[i];
    }
    const double c = ee > 0.0 ? ge / ee : 1.0;
    for (std::size_t i = 0; i < est.size(); ++i) out[i] = c * est[i];
  } else {
    const double shift = mean_of(truth) - mean_of(est);
    for (std::size_t i = 0; i < est.size(); ++i) out[i] = est[i] + shift;
  }
  return out;
}

nlohmann::ordered_json config_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  for (const auto& [k, v] : c.to_map()) j[k] = v;
  return j;
}

void write_report(const fs::path& path, nlohmann::ordered_json body, const ExperimentConfig& c, double seconds) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["seed"] = c.seed;
  j["config"] = config_json(c);
  j["sigma0_sq"] = c.sigma0_sq();
  for (auto& [k, v] : body.items()) j[k] = v;
  j["timing_seconds"] = seconds;
  write_text(path, j.dump(2) + "\n");
}

deform::Signal warp_observation(const ExperimentConfig& c, int sim, std::uint64_t run_seed) {
  const auto spectrum = log_bandpass_spectrum(c.length, c.band_lo, c.band_hi, c.band_taper);
  const auto gamma = sine_warp(c.length, sim, c.warp_amplitude);
  const Signal x = deform::synth_stationary(spectrum, c.length, deform::derive_seed(run_seed, {0}));
  return deform::apply_warp(x, gamma, deform::NoiseSpec{c.sigma0_sq()}, deform::derive_seed(run_seed, {1}));
}

deform::Signal modulation_observation(const ExperimentConfig& c, std::uint64_t run_seed) {
  const auto spectrum = linear_bandpass_spectrum(c.mod_length, c.mod_band_lo, c.mod_band_hi, c.mod_band_taper);
  const auto gamma = sine_modulation(c.mod_length, c.mod_amplitude);
  const Signal x = deform::synth_stationary(spectrum, c.mod_length, deform::derive_seed(run_seed, {0}));
  return deform::apply_modulation(x, gamma, deform::NoiseSpec{c.sigma0_sq()}, deform::derive_seed(run_seed, {1}));
}

}  // namespace

deform::PowerSpectrum log_bandpass_spectrum(std::size_t length, double lo, double hi, double taper) {
  RVector S(length, 0.0);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t k = 1; 2 * k < length; ++k) {
    const double lf = std::log(static_cast<double>(k) / static_cast<double>(length));
    S[k] = edge(lf - a, taper) * edge(b - lf, taper);
  }
  return normalized(std::move(S));
}

deform::PowerSpectrum linear_bandpass_spectrum(std::size_t length, double lo, double hi, double taper) {
  RVector S(length, 0.0);
  for (std::size_t k = 1; 2 * k < length; ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(length);
    S[k] = edge(f - lo, taper) * edge(hi - f, taper);
  }
  return normalized(std::move(S));
}

deform::DeformationFunction sine_warp(std::size_t length, int sim, double amplitude) {
  if (sim < 1 || sim > 3) throw std::invalid_argument("sine_warp: sim must be 1, 2 or 3");
  const double p = static_cast<double>(1 << (sim - 1));
  const double L = static_cast<double>(length);
  const double w = deform::kTwoPi * p / L;
  return deform::sample_deformation(
      DeformationKind::warp, length, deform::Boundary::periodic,
      [=](double t) { return t + amplitude / w * (1.0 - std::cos(w * t)); },
      [=](double t) { return 1.0 + amplitude * std::sin(w * t); });
}

deform::DeformationFunction sine_modulation(std::size_t length, double amplitude) {
  const double L = static_cast<double>(length);
  const double peak = amplitude * L;  // bins
  const double w = deform::kTwoPi / L;
  return deform::sample_deformation(
      DeformationKind::modulation, length, deform::Boundary::periodic,
      [=](double t) { return peak / w * (1.0 - std::cos(w * t)); },
      [=](double t) { return peak * std::sin(w * t); });
}

double CellSummary::ci95_proposed() const {
  const std::size_t n = runs - failed;
  return n > 0 ? 1.96 * std::sqrt(var_proposed / static_cast<double>(n)) : std::numeric_limits<double>::infinity();
}

double CellSummary::ci95_baseline() const {
  const std::size_t n = runs - failed;
  return n > 0 ? 1.96 * std::sqrt(var_baseline / static_cast<double>(n)) : std::numeric_limits<double>::infinity();
}

RunReport run_table1(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = Clock::now();
  RunReport report;
  report.config = config;

  struct Task {
    int sim;
    int k;
    std::size_t run;
  };
  std::vector<Task> tasks;
  for (int sim : config.sims)
    for (int k : config.wavelet_ks)
      for (std::size_t r = 0; r < config.runs; ++r) tasks.push_back({sim, k, r});

  report.rows.resize(tasks.size());
  deform::parallel_for(
      tasks.size(),
      [&](std::size_t i) {
        const Task& t = tasks[i];
        Table1Row& row = report.rows[i];
        row.run = t.run;
        row.sim = t.sim;
        row.k = t.k;
        row.seed = deform::derive_seed(config.seed, {static_cast<std::uint64_t>(t.sim), t.run});
        try {
          const Signal y = warp_observation(config, t.sim, row.seed);
          const auto gamma = sine_warp(config.length, t.sim, config.warp_amplitude);
          const auto est = deform::estimate_warping(y, config.warp_estimator(t.k));
          const RVector truth = deform::at_frames(gamma.gamma_prime, config.hop);
          row.err_proposed = deform::normalized_error(truth, est.gamma_prime_at_frames(), DeformationKind::warp);
          row.err_baseline =
              deform::normalized_error(truth, est.baseline_gamma_prime_at_frames(), DeformationKind::warp);
          row.iters = est.iterations.size();
          row.converged = est.converged;
        } catch (const std::exception& e) {
          row.err_proposed = row.err_baseline = std::numeric_limits<double>::quiet_NaN();
          row.error = e.what();
        }
      },
      config.threads);

  for (int sim : config.sims) {
    for (int k : config.wavelet_ks) {
      CellSummary cell;
      cell.sim = sim;
      cell.k = k;
      std::vector<double> p, b, it;
      for (const auto& row : report.rows) {
        if (row.sim != sim || row.k != k) continue;
        ++cell.runs;
        if (!row.error.empty()) {
          ++cell.failed;
          continue;
        }
        cell.converged += row.converged ? 1 : 0;
        p.push_back(row.err_proposed);
        b.push_back(row.err_baseline);
        it.push_back(static_cast<double>(row.iters));
      }
      cell.mean_proposed = mean_of(p);
      cell.var_proposed = var_of(p);
      cell.mean_baseline = mean_of(b);
      cell.var_baseline = var_of(b);
      cell.mean_iters = mean_of(it);
      report.cells.push_back(cell);
    }
  }
  report.seconds = seconds_since(t0);
  return report;
}

std::string table1_csv(const RunReport& report) {
  std::string out = "run,seed,sim,k,err_proposed,err_baseline,iters\n";
  for (const auto& r : report.rows) {
    out += std::to_string(r.run) + "," + std::to_string(r.seed) + "," + std::to_string(r.sim) + "," +
           std::to_string(r.k) + "," + fixed(r.err_proposed) + "," + fixed(r.err_baseline) + "," +
           std::to_string(r.iters) + "\n";
  }
  for (const auto& c : report.cells) {
    const std::string key = "," + std::to_string(c.sim) + "," + std::to_string(c.k) + ",";
    out += "mean," + key + fixed(c.mean_proposed) + "," + fixed(c.mean_baseline) + "," + fixed(c.mean_iters, 2) + "\n";
    out += "variance," + key + fixed(c.var_proposed, 8) + "," + fixed(c.var_baseline, 8) + ",\n";
  }
  return out;
}

std::string report_json(const RunReport& report) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["seed"] = report.config.seed;
  j["config"] = config_json(report.config);
  j["sigma0_sq"] = report.config.sigma0_sq();
  j["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : report.cells) {
    j["cells"].push_back({{"sim", c.sim},
                          {"k", c.k},
                          {"runs", c.runs},
                          {"failed", c.failed},
                          {"converged", c.converged},
                          {"mean_proposed", c.mean_proposed},
                          {"var_proposed", c.var_proposed},
                          {"ci95_proposed", c.ci95_proposed()},
                          {"mean_baseline", c.mean_baseline},
                          {"var_baseline", c.var_baseline},
                          {"ci95_baseline", c.ci95_baseline()},
                          {"mean_iters", c.mean_iters}});
  }
  j["failures"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rows)
    if (!r.error.empty()) j["failures"].push_back({{"sim", r.sim}, {"k", r.k}, {"run", r.run}, {"error", r.error}});
  j["timing_seconds"] = report.seconds;
  return j.dump(2) + "\n";
}

std::string write_table1(const RunReport& report) {
  const fs::path dir(report.config.out_dir);
  fs::create_directories(dir);
  const fs::path csv = dir / "table1.csv";
  write_text(csv, table1_csv(report));
  write_text(dir / "report.json", report_json(report));
  return csv.string();
}

DemoResult run_demo(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = Clock::now();
  const bool warp = config.scenario != "modulation-demo";
  const fs::path dir(config.out_dir);
  fs::create_directories(dir);
  DemoResult res;

  Eigen::MatrixXd magnitude;
  RVector truth, estimate, baseline;
  std::size_t hop = 0;
  double row_unit = 1.0, row_origin = 0.0;
  std::string row_label;
  nlohmann::ordered_json extra;

  if (warp) {
    const int sim = config.sims.front();
    const int k = config.wavelet_ks.front();
    const std::uint64_t seed = deform::derive_seed(config.seed, {static_cast<std::uint64_t>(sim), 0});
    const Signal y = warp_observation(config, sim, seed);
    const auto cfg = config.warp_estimator(k);
    const auto est = deform::estimate_warping(y, cfg);
    magnitude = deform::cwt(y, deform::design_wavelet(k), cfg.warp.grid).coeffs.cwiseAbs();
    truth = deform::at_frames(sine_warp(config.length, sim, config.warp_amplitude).gamma_prime, config.hop);
    estimate = est.gamma_prime_at_frames();
    baseline = est.baseline_gamma_prime_at_frames();
    hop = config.hop;
    row_label = "log2_scale";
    row_unit = 1.0 / config.voices;
    extra = {{"sim", sim}, {"k", k}, {"iterations", est.iterations.size()}, {"converged", est.converged},
             {"stride", est.stride}};
  } else {
    const std::uint64_t seed = deform::derive_seed(config.seed, {0});
    const Signal y = modulation_observation(config, seed);
    const auto cfg = config.modulation_estimator();
    const auto est = deform::estimate_modulation(y, cfg);
    const auto frame = deform::make_gabor_frame(config.mod_length, config.mod_hop, 1, config.mod_window_std);
    const auto G = deform::dgt(y, frame).coeffs;
    const auto M = static_cast<Eigen::Index>(frame.M());
    // Positive frequencies only; the negative half carries noise alone.
    magnitude = G.topRows(M / 2).cwiseAbs();
    truth = deform::at_frames(sine_modulation(config.mod_length, config.mod_amplitude).gamma_prime, config.mod_hop);
    estimate = est.gamma_prime_at_frames();
    baseline = est.baseline_gamma_prime_at_frames();
    hop = config.mod_hop;
    row_label = "frequency";
    row_unit = 1.0 / static_cast<double>(config.mod_length);
    extra = {{"iterations", est.iterations.size()}, {"converged", est.converged}, {"stride", est.stride}};
  }

  const auto kind = warp ? DeformationKind::warp : DeformationKind::modulation;
  res.frames = truth.size();
  res.err_proposed = deform::normalized_error(truth, estimate, kind);
  res.err_baseline = deform::normalized_error(truth, baseline, kind);
  const RVector est_al = align(truth, estimate, kind);
  const RVector base_al = align(truth, baseline, kind);

  // transform.csv: one line per frame, one column per transform row.
  {
    std::string s = "frame,time";
    for (Eigen::Index r = 0; r < magnitude.rows(); ++r) s += "," + row_label + "_" + fixed(row_origin + r * row_unit, 6);
    s += "\n";
    for (Eigen::Index n = 0; n < magnitude.cols(); ++n) {
      s += std::to_string(n) + "," + std::to_string(static_cast<std::size_t>(n) * hop);
      for (Eigen::Index r = 0; r < magnitude.rows(); ++r) s += "," + fixed(magnitude(r, n), 8);
      s += "\n";
    }
    write_text(dir / "transform.csv", s);
  }
  auto curve = [&](const std::string& name, const RVector& raw, const RVector* aligned) {
    std::string s = aligned ? "frame,time,gamma_prime,gamma_prime_aligned\n" : "frame,time,gamma_prime\n";
    for (std::size_t n = 0; n < raw.size(); ++n) {
      s += std::to_string(n) + "," + std::to_string(n * hop) + "," + fixed(raw[n], 8);
      if (aligned) s += "," + fixed((*aligned)[n], 8);
      s += "\n";
    }
    write_text(dir / name, s);
    res.files.push_back((dir / name).string());
  };
  res.files.insert(res.files.begin(), (dir / "transform.csv").string());
  curve("truth.csv", truth, nullptr);
  curve("baseline.csv", baseline, &base_al);
  curve("estimate.csv", estimate, &est_al);

  res.seconds = seconds_since(t0);
  extra["frames"] = res.frames;
  extra["err_proposed"] = res.err_proposed;
  extra["err_baseline"] = res.err_baseline;
  write_report(dir / "report.json", extra, config, res.seconds);
  return res;
}

double local_scale_log_variance(const Signal& x, int wavelet_k, std::size_t hop, std::size_t trim) {
  deform::ScaleGrid grid;
  grid.a = hop;
  const Signal z = x.is_real() ? deform::analytic_signal(x) : x;
  RVector s = deform::local_scale(deform::cwt(z, deform::design_wavelet(wavelet_k), grid));
  deform::fill_missing_linear(s);
  if (s.size() <= 2 * trim + 1) throw std::invalid_argument("local_scale_log_variance: signal too short for trim");
  std::vector<double> logs;
  for (std::size_t n = trim; n + trim < s.size(); ++n) logs.push_back(std::log(s[n]));
  return var_of(logs);
}

AudioResult run_audio(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = Clock::now();
  const WavData wav = read_wav(config.input);
  AudioResult res;
  std::size_t n = std::min(wav.mono.size(), config.audio_max_length);
  n -= n % config.hop;
  if (n < 4 * config.hop) throw std::invalid_argument("run_audio: input too short");
  res.samples = n;

  Signal y;
  y.fs = wav.sample_rate;
  y.samples.resize(n);
  std::size_t clipped_in = 0;
  for (std::size_t i = 0; i < n; ++i) {
    y.samples[i] = wav.mono[i];
    if (std::abs(wav.mono[i]) >= 0.999) ++clipped_in;
  }

  auto cfg = config.warp_estimator(config.wavelet_ks.front());
  cfg.boundary = deform::Boundary::open;
  const auto est = deform::estimate_warping(deform::analytic_signal(y), cfg);
  const auto inverse = deform::invert_deformation(est.gamma_hat);
  Signal out = deform::apply_warp(y, inverse, deform::NoiseSpec{0.0}, 0);

  double peak = 0.0;
  for (const auto& v : out.samples) peak = std::max(peak, std::abs(v.real()));
  std::vector<double> samples(n);
  const double gain = peak > 0.0 ? 0.99 / peak : 1.0;
  for (std::size_t i = 0; i < n; ++i) samples[i] = gain * out.samples[i].real();

  const fs::path dir(config.out_dir);
  fs::create_directories(dir);
  {
    std::string s = "t,gamma,gamma_prime\n";
    for (std::size_t i = 0; i < n; ++i)
      s += std::to_string(i) + "," + fixed(est.gamma_hat.gamma[i], 6) + "," + fixed(est.gamma_hat.gamma_prime[i], 8) + "\n";
    write_text(dir / "gamma.csv", s);
  }
  res.clipped = write_wav_float((dir / "stationarized.wav").string(), samples, wav.sample_rate);
  res.files = {(dir / "gamma.csv").string(), (dir / "stationarized.wav").string()};

  const std::size_t trim = std::max<std::size_t>(2, n / config.hop / 16);
  Signal stationary;
  stationary.samples.assign(samples.begin(), samples.end());
  res.local_scale_var_in = local_scale_log_variance(y, config.wavelet_ks.front(), config.hop, trim);
  res.local_scale_var_out = local_scale_log_variance(stationary, config.wavelet_ks.front(), config.hop, trim);
  res.seconds = seconds_since(t0);

  nlohmann::ordered_json extra = {{"input", config.input},
                                  {"sample_rate", wav.sample_rate},
                                  {"samples", n},
                                  {"input_clipped_samples", clipped_in},
                                  {"output_clipped_samples", res.clipped},
                                  {"iterations", est.iterations.size()},
                                  {"converged", est.converged},
                                  {"local_scale_log_var_in", res.local_scale_var_in},
                                  {"local_scale_log_var_out", res.local_scale_var_out}};
  write_report(dir / "report.json", extra, config, res.seconds);
  return res;
}

deform::DeformationFunction write_engine_wav(const std::string& path, std::size_t length, std::uint32_t sample_rate,
                                             double speedup, std::uint64_t seed) {
  if (!(speedup > -1.0)) throw std::invalid_argument("write_engine_wav: speedup must exceed -1");
  const double span = static_cast<double>(length - 1);
  const double c = 1.0 / (1.0 + 0.5 * speedup);
  const auto gamma = deform::sample_deformation(
      DeformationKind::warp, length, deform::Boundary::open,
      [=](double t) { return c * (t + 0.5 * speedup * t * t / span); },
      [=](double t) { return c * (1.0 + speedup * t / span); });
  const auto spectrum = log_bandpass_spectrum(length, 1.0 / 32.0, 1.0 / 8.0, 0.1);
  const Signal x = deform::synth_stationary(spectrum, length, deform::derive_seed(seed, {0}));
  Signal real;
  real.samples.resize(length);
  for (std::size_t i = 0; i < length; ++i) real.samples[i] = std::sqrt(2.0) * x.samples[i].real();
  const Signal y = deform::apply_warp(real, gamma, deform::NoiseSpec{0.0}, 0);
  std::vector<double> s(length);
  for (std::size_t i = 0; i < length; ++i) s[i] = 0.2 * y.samples[i].real();
  write_wav_pcm16(path, s, sample_rate);
  return gamma;
}

}  // namespace harness
