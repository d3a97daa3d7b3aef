#include "harness/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument("config: " + key + " expects a number, got '" + v + "'");
  return d;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long u = 0;
  try {
    if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
    u = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw std::invalid_argument("config: " + key + " expects a non-negative integer, got '" + v + "'");
  return u;
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(static_cast<int>(to_u64(key, trim(item))));
  if (out.empty()) throw std::invalid_argument("config: " + key + " expects a comma-separated list");
  return out;
}

// Shortest representation that round-trips.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  auto sz = [&] { return static_cast<std::size_t>(to_u64(key, v)); };
  auto dbl = [&] { return to_double(key, v); };
  if (key == "scenario") scenario = v;
  else if (key == "seed") seed = to_u64(key, v);
  else if (key == "runs") runs = sz();
  else if (key == "out") out_dir = v;
  else if (key == "threads") threads = sz();
  else if (key == "snr_db") snr_db = dbl();
  else if (key == "length") length = sz();
  else if (key == "sims" || key == "sim") sims = to_int_list(key, v);
  else if (key == "wavelet_ks" || key == "wavelet_k") wavelet_ks = to_int_list(key, v);
  else if (key == "warp_amplitude") warp_amplitude = dbl();
  else if (key == "band_lo") band_lo = dbl();
  else if (key == "band_hi") band_hi = dbl();
  else if (key == "band_taper") band_taper = dbl();
  else if (key == "hop") hop = sz();
  else if (key == "voices") voices = static_cast<int>(sz());
  else if (key == "scale_rows") scale_rows = sz();
  else if (key == "max_fine_shift") max_fine_shift = static_cast<int>(sz());
  else if (key == "mod_length") mod_length = sz();
  else if (key == "mod_amplitude") mod_amplitude = dbl();
  else if (key == "mod_band_lo") mod_band_lo = dbl();
  else if (key == "mod_band_hi") mod_band_hi = dbl();
  else if (key == "mod_band_taper") mod_band_taper = dbl();
  else if (key == "mod_hop") mod_hop = sz();
  else if (key == "mod_window_std") mod_window_std = dbl();
  else if (key == "mod_stride") mod_stride = sz();
  else if (key == "mod_max_shift") mod_max_shift = static_cast<int>(sz());
  else if (key == "epsilon") epsilon = dbl();
  else if (key == "max_iters") max_iters = sz();
  else if (key == "noise_mode") noise_mode = v;
  else if (key == "stride") stride = sz();
  else if (key == "input") input = v;
  else if (key == "audio_max_length") audio_max_length = sz();
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument("config: " + m); };
  if (scenario != "table1" && scenario != "warp-demo" && scenario != "modulation-demo" && scenario != "audio")
    fail("scenario must be table1, warp-demo, modulation-demo or audio");
  if (runs < 1) fail("runs must be at least 1");
  for (int s : sims)
    if (s < 1 || s > 3) fail("sim must be 1, 2 or 3");
  for (int k : wavelet_ks)
    if (k < 1) fail("wavelet_k must be positive");
  if (length == 0 || hop == 0 || length % hop != 0) fail("hop must divide length");
  if (!(warp_amplitude >= 0.0 && warp_amplitude < 1.0)) fail("warp_amplitude must lie in [0, 1)");
  if (!(band_lo > 0.0 && band_lo < band_hi && band_hi < 0.5)) fail("need 0 < band_lo < band_hi < 0.5");
  if (!(band_taper > 0.0)) fail("band_taper must be positive");
  if (voices < 1 || scale_rows < 2) fail("need voices >= 1 and scale_rows >= 2");
  if (mod_length == 0 || mod_hop == 0 || mod_length % mod_hop != 0) fail("mod_hop must divide mod_length");
  if (!(mod_band_lo > 0.0 && mod_band_lo < mod_band_hi && mod_band_hi < 0.5)) fail("need 0 < mod_band_lo < mod_band_hi < 0.5");
  if (!(mod_band_taper > 0.0)) fail("mod_band_taper must be positive");
  if (!(mod_amplitude >= 0.0 && mod_amplitude < 0.25)) fail("mod_amplitude must lie in [0, 0.25)");
  if (mod_max_shift < 1) fail("mod_max_shift must be positive");
  if (noise_mode != "estimate" && noise_mode != "known") fail("noise_mode must be estimate or known");
  if (!(epsilon > 0.0) || max_iters == 0) fail("need epsilon > 0 and max_iters >= 1");
  if (scenario == "audio" && input.empty()) fail("audio needs an input file");
}

std::map<std::string, std::string> ExperimentConfig::to_map() const {
  return {
      {"scenario", scenario},
      {"seed", std::to_string(seed)},
      {"runs", std::to_string(runs)},
      {"out", out_dir},
      {"threads", std::to_string(threads)},
      {"snr_db", fmt(snr_db)},
      {"length", std::to_string(length)},
      {"sims", join(sims)},
      {"wavelet_ks", join(wavelet_ks)},
      {"warp_amplitude", fmt(warp_amplitude)},
      {"band_lo", fmt(band_lo)},
      {"band_hi", fmt(band_hi)},
      {"band_taper", fmt(band_taper)},
      {"hop", std::to_string(hop)},
      {"voices", std::to_string(voices)},
      {"scale_rows", std::to_string(scale_rows)},
      {"max_fine_shift", std::to_string(max_fine_shift)},
      {"mod_length", std::to_string(mod_length)},
      {"mod_amplitude", fmt(mod_amplitude)},
      {"mod_band_lo", fmt(mod_band_lo)},
      {"mod_band_hi", fmt(mod_band_hi)},
      {"mod_band_taper", fmt(mod_band_taper)},
      {"mod_hop", std::to_string(mod_hop)},
      {"mod_window_std", fmt(mod_window_std)},
      {"mod_stride", std::to_string(mod_stride)},
      {"mod_max_shift", std::to_string(mod_max_shift)},
      {"epsilon", fmt(epsilon)},
      {"max_iters", std::to_string(max_iters)},
      {"noise_mode", noise_mode},
      {"stride", std::to_string(stride)},
      {"input", input},
      {"audio_max_length", std::to_string(audio_max_length)},
  };
}

double ExperimentConfig::sigma0_sq() const { return std::pow(10.0, -snr_db / 10.0); }

deform::EstimatorConfig ExperimentConfig::warp_estimator(int wavelet_k) const {
  deform::EstimatorConfig c;
  c.epsilon = epsilon;
  c.max_iters = max_iters;
  c.noise_mode = noise_mode == "known" ? deform::NoiseMode::known : deform::NoiseMode::estimate;
  c.sigma0_sq = sigma0_sq();
  c.stride = stride;
  c.threads = 1;
  c.warp.wavelet_k = wavelet_k;
  c.warp.grid.q = std::pow(2.0, 1.0 / voices);
  c.warp.grid.a = hop;
  c.warp.grid.count = static_cast<int>(scale_rows);
  c.warp.window_count = scale_rows;
  c.warp.max_fine_shift = max_fine_shift;
  return c;
}

deform::EstimatorConfig ExperimentConfig::modulation_estimator() const {
  deform::EstimatorConfig c;
  c.epsilon = epsilon;
  c.max_iters = max_iters;
  c.noise_mode = noise_mode == "known" ? deform::NoiseMode::known : deform::NoiseMode::estimate;
  c.sigma0_sq = sigma0_sq();
  c.stride = mod_stride;
  c.threads = 1;
  c.modulation.hop = mod_hop;
  c.modulation.window_std = mod_window_std;
  c.modulation.max_fine_shift = mod_max_shift;
  return c;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: " + path + ":" + std::to_string(lineno) + ": expected key = value");
    base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

}  // namespace harness
