// Acceptance suite: one PASS/FAIL line per criterion, details indented below.
// Usage: acceptance [--only N] [--runs R] [--mod-runs R] [--threads T]

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "deform/covariance.hpp"
#include "deform/deformation.hpp"
#include "deform/estimators.hpp"
#include "deform/fft.hpp"
#include "deform/gabor.hpp"
#include "deform/parallel.hpp"
#include "deform/random.hpp"
#include "deform/wavelet.hpp"
#include "harness/config.hpp"
#include "harness/experiments.hpp"
#include "oracles.hpp"

using namespace deform;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::size_t runs = 100;
  std::size_t mod_runs = 50;
  std::size_t threads = 0;
  std::uint64_t seed = 1;
};

struct Verdict {
  bool pass = false;
  std::string summary;
  std::vector<std::string> details;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

harness::ExperimentConfig table1_config(const Options& o, std::vector<int> ks) {
  harness::ExperimentConfig c;
  c.seed = o.seed;
  c.runs = o.runs;
  c.sims = {1};
  c.wavelet_ks = std::move(ks);
  c.threads = o.threads;
  return c;
}

void describe_cells(const harness::RunReport& r, Verdict& v) {
  for (const auto& c : r.cells)
    v.details.push_back(fmt("sim %d k=%d: proposed %.4f +- %.4f, baseline %.4f +- %.4f (95%% CI), "
                            "converged %zu/%zu, failed %zu, mean iterations %.1f",
                            c.sim, c.k, c.mean_proposed, c.ci95_proposed(), c.mean_baseline, c.ci95_baseline(),
                            c.converged, c.runs, c.failed, c.mean_iters));
}

// 1. Table 1, simulation 1, k = 70.
Verdict criterion1(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const harness::RunReport r = harness::run_table1(table1_config(o, {70}));
  const double secs = seconds_since(t0);
  const auto& c = r.cells.front();
  const bool prop_ok = c.mean_proposed >= 0.08 && c.mean_proposed <= 0.20;
  const bool base_ok = c.mean_baseline >= 0.30 && c.mean_baseline <= 0.50;
  const bool ratio_ok = c.mean_proposed < 0.5 * c.mean_baseline;
  // The budget is 30 min on 8 cores; this machine's measured wall time is
  // scaled by the worker count actually available.
  const unsigned workers = o.threads > 0 ? static_cast<unsigned>(o.threads) : std::max(1u, std::thread::hardware_concurrency());
  const double projected = secs * std::min(workers, 8u) / 8.0;
  const bool time_ok = projected <= 1800.0;
  Verdict v;
  v.pass = prop_ok && base_ok && ratio_ok && time_ok && c.failed == 0;
  v.summary = fmt("proposed %.4f in [0.08,0.20]: %s; baseline %.4f in [0.30,0.50]: %s; ratio %.3f < 0.5: %s; "
                  "projected 8-core time %.0f s <= 1800 s: %s",
                  c.mean_proposed, prop_ok ? "yes" : "no", c.mean_baseline, base_ok ? "yes" : "no",
                  c.mean_proposed / c.mean_baseline, ratio_ok ? "yes" : "no", projected, time_ok ? "yes" : "no");
  describe_cells(r, v);
  v.details.push_back(fmt("%zu runs, wall time %.1f s with %u worker(s)", c.runs, secs, workers));
  return v;
}

// 2. Ordering over wavelet degrees on simulation 1.
Verdict criterion2(const Options& o) {
  const harness::RunReport r = harness::run_table1(table1_config(o, {70, 25, 7}));
  Verdict v;
  describe_cells(r, v);
  v.pass = true;
  std::string order;
  for (std::size_t i = 0; i + 1 < r.cells.size(); ++i) {
    const auto& a = r.cells[i];
    const auto& b = r.cells[i + 1];
    const bool ordered = a.mean_proposed <= b.mean_proposed;
    const double a_hi = a.mean_proposed + a.ci95_proposed(), b_lo = b.mean_proposed - b.ci95_proposed();
    const bool overlap = a_hi >= b_lo && b.mean_proposed + b.ci95_proposed() >= a.mean_proposed - a.ci95_proposed();
    if (!ordered && !overlap) v.pass = false;
    if (!order.empty()) order += "; ";
    order += fmt("k=%d %.4f %s k=%d %.4f%s", a.k, a.mean_proposed, ordered ? "<=" : ">", b.k, b.mean_proposed,
                 ordered ? "" : (overlap ? " (95% CIs overlap)" : " (CIs disjoint)"));
  }
  for (const auto& c : r.cells) v.pass = v.pass && c.failed == 0;
  v.summary = order;
  return v;
}

// 3. Remainder of the shifted-slice approximation against its bound.
Verdict criterion3(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t L = 1024, a = 16, R = 2000;
  const double B = 2.0;  // peak frequency offset, bins
  const auto LL = static_cast<double>(L);
  const auto gamma = sample_deformation(
      DeformationKind::modulation, L, Boundary::periodic, [&](double t) { return B * LL / kTwoPi * std::sin(kTwoPi * t / LL); },
      [&](double t) { return B * std::cos(kTwoPi * t / LL); });
  const GaborFrame frame = make_gabor_frame(L, a, 1, 16.0);
  const PowerSpectrum S = harness::linear_bandpass_spectrum(L, 0.18, 0.32, 0.01);
  const double var_Z = S.variance();
  const RemainderBound bound = shift_remainder_bound(frame, gamma, var_Z);

  const std::vector<std::size_t> frames{0, 16, 24, 40, 63};
  Eigen::MatrixXd mean_sq = Eigen::MatrixXd::Zero(L, frames.size());
  CVector h(L);
  for (std::size_t r = 0; r < R; ++r) {
    const Signal z = synth_stationary(S, L, derive_seed(o.seed, {3, r}));
    for (std::size_t f = 0; f < frames.size(); ++f) {
      const std::size_t n = frames[f];
      const double t0f = static_cast<double>(n * a);
      const double g0 = gamma.gamma[n * a], d0 = gamma.gamma_prime[n * a];
      for (std::size_t u = 0; u < L; ++u) {
        const std::size_t t = (n * a + u) % L;
        const double uc = 2 * u >= L ? static_cast<double>(u) - LL : static_cast<double>(u);
        const double exact = gamma.value(t0f + uc);
        const cplx diff = std::polar(1.0, kTwoPi * exact / LL) - std::polar(1.0, kTwoPi * (g0 + d0 * uc) / LL);
        h[u] = z.samples[t] * std::conj(frame.g[u]) * diff;
      }
      fft::forward(h);  // e^{-2 i pi m u / L}: identical for u and its centred representative
      for (std::size_t m = 0; m < L; ++m) mean_sq(m, f) += std::norm(h[m]) / static_cast<double>(R);
    }
  }
  const double worst = mean_sq.maxCoeff();
  Verdict v;
  const double secs = seconds_since(t0);
  v.pass = bound.hypothesis_ok && worst <= bound.bound && secs <= 300.0;
  v.summary = fmt("max_m E|R[m]|^2 = %.3e <= bound %.3e over %zu frames x %zu bins (%zu realizations, %.1f s)", worst,
                  bound.bound, frames.size(), L, R, secs);
  v.details.push_back(fmt("sup|gamma''| = %.4e, L > 4/(pi sup|gamma''|) = %.1f: %s; T = %.1f, mu1 = %.3e, mu2 = %.3e, "
                          "var Z = %.3f",
                          bound.gamma_second_sup, 4.0 / (kPi * bound.gamma_second_sup),
                          bound.hypothesis_ok ? "yes" : "no", bound.T, bound.mu1, bound.mu2, var_Z));
  return v;
}

// 4. Gabor covariance lower bound over random frames.
Verdict criterion4(const Options& o) {
  Rng rng(derive_seed(o.seed, {4}));
  const std::vector<std::size_t> lengths{96, 120, 128, 144, 192, 240, 256};
  Verdict v;
  v.pass = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  int rejected = 0;
  for (int trial = 0; trial < 20;) {
    const std::size_t L = lengths[rng.engine()() % lengths.size()];
    std::vector<std::size_t> divisors;
    for (std::size_t d = 2; d <= L / 4; ++d)
      if (L % d == 0) divisors.push_back(d);
    const std::size_t a = divisors[rng.engine()() % divisors.size()];
    const std::size_t b = divisors[rng.engine()() % divisors.size()];
    const double sd = 1.0 + 0.5 * static_cast<double>(rng.engine()() % 32);
    const GaborFrame f = make_gabor_frame(L, a, b, sd);
    const double Kg = window_condition_Kg(f);
    // A window too short to cover every residue class mod M is not a frame.
    if (!(Kg > 1e-300)) {
      ++rejected;
      continue;
    }
    ++trial;
    RVector s(L, 0.0);
    for (std::size_t k = 1; 2 * k < L; ++k) s[k] = std::abs(rng.normal());
    const double sigma0_sq = 1.0;
    const auto cov = shifted_cov(PowerSpectrum(s), f, sigma0_sq, rng.normal());
    const double lam = min_eigenvalue(cov.combined());
    const double lam_n = min_eigenvalue(cov.C_N);
    const bool ok = lam >= sigma0_sq * Kg - 1e-8;
    v.pass = v.pass && ok;
    worst_margin = std::min(worst_margin, lam - sigma0_sq * Kg);
    v.details.push_back(fmt("L=%zu a=%zu b=%zu std=%.1f: K_g=%.3e lambda_min(C_Z+C_N)=%.3e lambda_min(C_N)=%.3e "
                            "(L K_g = %.3e) %s",
                            L, a, b, sd, Kg, lam, lam_n, static_cast<double>(L) * Kg, ok ? "ok" : "VIOLATED"));
  }
  v.summary = fmt("20 random frames (%d non-frame draws skipped), smallest lambda_min - sigma0^2 K_g = %.3e "
                  "(>= -1e-8 required)",
                  rejected, worst_margin);
  return v;
}

// 5. Wavelet covariance lower bound on the coarse grid of the k = 4 wavelet.
Verdict criterion5(const Options&) {
  const Wavelet w = design_wavelet(4);
  const double q = std::pow(2.0, 1.0 / 70.0);
  const std::size_t j = choose_coarse_stride(w, q, 64, 1e-3);
  ScaleGrid fine;
  fine.q = q;
  fine.count = 280;
  fine.stride = j;
  const ScaleGrid coarse = fine.coarse();
  const double Kpsi = mellin_condition_Kpsi(w, coarse.q);
  const harness::ExperimentConfig c;
  const double sigma0_sq = c.sigma0_sq();
  const PowerSpectrum S = harness::log_bandpass_spectrum(c.length, c.band_lo, c.band_hi, c.band_taper);
  const auto density = [&S](double f) { return f > 0.0 && f < 0.5 ? S.density(f) : 0.0; };
  Verdict v;
  v.pass = true;
  double worst = std::numeric_limits<double>::infinity();
  for (double delta : {0.0, 0.37, -2.5}) {
    const auto cov = wavelet_cov(density, w, coarse, delta, sigma0_sq);
    const double lam = min_eigenvalue(cov.combined());
    const double lam_n = min_eigenvalue(cov.C_N);
    worst = std::min(worst, lam - sigma0_sq * Kpsi);
    v.pass = v.pass && lam >= sigma0_sq * Kpsi - 1e-6;
    v.details.push_back(fmt("delta=%.2f: lambda_min(C_X+C_N)=%.6e, lambda_min(C_N)=%.6e", delta, lam, lam_n));
  }
  v.summary = fmt("k=4, stride %zu (ratio q^%zu = %.4f, %d scales): sigma0^2 K_psi = %.6e, smallest margin %.3e "
                  "(>= -1e-6 required)",
                  j, j, coarse.q, coarse.count, sigma0_sq * Kpsi, worst);
  return v;
}

// 6. Literal-sum oracles and Monte Carlo covariance agreement.
Verdict criterion6(const Options& o) {
  Verdict v;
  v.pass = true;
  const std::size_t L = 256, R = 10000;
  Rng rng(derive_seed(o.seed, {6}));
  const Signal x{rng.complex_white_noise(L, 1.0), 1.0};

  const GaborFrame f = make_gabor_frame(L, 16, 4, 12.0);
  const auto G = dgt(x, f).coeffs;
  const double dgt_rel = (G - oracle::literal_dgt(x.samples, f)).norm() / G.norm();
  v.pass = v.pass && dgt_rel <= 1e-8;
  v.details.push_back(fmt("dgt vs literal sum (L=256, a=16, b=4): relative error %.2e", dgt_rel));

  const Wavelet w = design_wavelet(70);
  ScaleGrid grid;
  grid.q = std::pow(2.0, 1.0 / 8.0);
  grid.a = 16;
  grid.count = 24;
  const auto W = cwt(x, w, grid).coeffs;
  const double cwt_rel = (W - oracle::literal_cwt(x.samples, w, grid)).norm() / W.norm();
  v.pass = v.pass && cwt_rel <= 1e-8;
  v.details.push_back(fmt("cwt vs literal sum (L=256, k=70, 24 scales): relative error %.2e", cwt_rel));

  const PowerSpectrum S = harness::linear_bandpass_spectrum(L, 0.05, 0.3, 0.02);
  const double sigma0_sq = 0.1;
  const Eigen::MatrixXcd CZ = analytic_cov(S, f), CN = noise_cov(f, sigma0_sq);
  ScaleGrid wgrid;
  wgrid.q = std::pow(2.0, 0.25);
  wgrid.a = 16;
  wgrid.m_min = -1;
  wgrid.count = 10;
  const Wavelet w7 = design_wavelet(7);
  const Eigen::MatrixXcd CX = wavelet_cov_bins(S, w7, wgrid);
  oracle::CovarianceAccumulator gz, gn, wx;
  for (std::size_t r = 0; r < R; ++r) {
    const Signal z = synth_stationary(S, L, derive_seed(o.seed, {6, 1, r}));
    gz.add(dgt(z, f).coeffs.col(5));
    wx.add(cwt(z, w7, wgrid).coeffs.col(9));
    Rng nr(derive_seed(o.seed, {6, 2, r}));
    gn.add(dgt(Signal{nr.complex_white_noise(L, sigma0_sq), 1.0}, f).coeffs.col(2));
  }
  const double dz = oracle::max_standardized_deviation(gz.mean(), CZ, R);
  const double dn = oracle::max_standardized_deviation(gn.mean(), CN, R);
  const double dx = oracle::max_standardized_deviation(wx.mean(), CX, R);
  v.pass = v.pass && dz <= 5.0 && dn <= 5.0 && dx <= 5.0;
  v.details.push_back(fmt("Gabor signal covariance: max deviation %.2f SE", dz));
  v.details.push_back(fmt("Gabor noise covariance: max deviation %.2f SE", dn));
  v.details.push_back(fmt("wavelet covariance: max deviation %.2f SE", dx));
  v.summary = fmt("literal sums %.1e / %.1e (<= 1e-8); covariances %.2f / %.2f / %.2f SE (<= 5) at 1e4 realizations",
                  dgt_rel, cwt_rel, dz, dn, dx);
  return v;
}

// 7. Warp operator: unitarity, composition and weak whiteness.
Verdict criterion7(const Options& o) {
  Verdict v;
  v.pass = true;
  const harness::ExperimentConfig c;
  const std::size_t L = 4096;
  const PowerSpectrum S = harness::log_bandpass_spectrum(L, c.band_lo, c.band_hi, c.band_taper);
  auto energy = [](const CVector& s) {
    double e = 0.0;
    for (const auto& z : s) e += std::norm(z);
    return e;
  };
  double worst_unit = 0.0, worst_comp = 0.0;
  for (int sim = 1; sim <= 3; ++sim) {
    const auto g = harness::sine_warp(L, sim, c.warp_amplitude);
    for (std::uint64_t r = 0; r < 3; ++r) {
      const Signal x = synth_stationary(S, L, derive_seed(o.seed, {7, std::uint64_t(sim), r}));
      const Signal y = apply_warp(x, g, {}, 0);
      worst_unit = std::max(worst_unit, std::abs(energy(y.samples) / energy(x.samples) - 1.0));
    }
    const auto g2 = harness::sine_warp(L, sim % 3 + 1, 0.2);
    const Signal x = synth_stationary(S, L, derive_seed(o.seed, {7, 9, std::uint64_t(sim)}));
    const Signal seq = apply_warp(apply_warp(x, g, {}, 0), g2, {}, 0);
    const Signal once = apply_warp(x, compose(g, g2), {}, 0);
    double d = 0.0;
    for (std::size_t t = 0; t < L; ++t) d += std::norm(seq.samples[t] - once.samples[t]);
    worst_comp = std::max(worst_comp, std::sqrt(d / energy(once.samples)));
  }
  v.pass = worst_unit <= 1e-3 && worst_comp <= 1e-3;
  v.details.push_back(fmt("unitarity: max | ||D x||^2 / ||x||^2 - 1 | = %.2e over 9 signals", worst_unit));
  v.details.push_back(fmt("composition D_g2 D_g1 = D_(g1 o g2): max relative error %.2e", worst_comp));

  // Weak whiteness: <D N, phi_i> has covariance sigma^2 <phi_j, phi_i> for
  // resolved atoms phi_i (pointwise the discrete warped noise has variance
  // gamma' sigma^2, see the README).
  const std::size_t Lw = 1024, R = 10000;
  const double sigma_sq = 0.5;
  const auto gw = harness::sine_warp(Lw, 1, c.warp_amplitude);
  std::vector<CVector> atoms;
  for (double centre : {100.0, 300.0, 330.0, 700.0})
    for (double freq : {0.05, 0.12, 0.2}) {
      CVector phi(Lw);
      for (std::size_t t = 0; t < Lw; ++t) {
        const double u = static_cast<double>(t) - centre;
        phi[t] = std::exp(-0.5 * u * u / (24.0 * 24.0)) * std::polar(1.0, kTwoPi * freq * static_cast<double>(t));
      }
      atoms.push_back(std::move(phi));
    }
  const auto n_atoms = static_cast<Eigen::Index>(atoms.size());
  Eigen::MatrixXcd gram(n_atoms, n_atoms);
  for (Eigen::Index i = 0; i < n_atoms; ++i)
    for (Eigen::Index j = 0; j < n_atoms; ++j) {
      cplx s{0.0, 0.0};
      for (std::size_t t = 0; t < Lw; ++t) s += atoms[j][t] * std::conj(atoms[i][t]);
      gram(i, j) = sigma_sq * s;  // E[<N,phi_i> conj(<N,phi_j>)]
    }
  oracle::CovarianceAccumulator acc;
  Eigen::VectorXcd proj(n_atoms);
  for (std::size_t r = 0; r < R; ++r) {
    Rng nr(derive_seed(o.seed, {7, 3, r}));
    const Signal n{nr.complex_white_noise(Lw, sigma_sq), 1.0};
    const Signal dn = apply_warp(n, gw, {}, 0);
    for (Eigen::Index i = 0; i < n_atoms; ++i) {
      cplx s{0.0, 0.0};
      for (std::size_t t = 0; t < Lw; ++t) s += dn.samples[t] * std::conj(atoms[i][t]);
      proj(i) = s;
    }
    acc.add(proj);
  }
  const double dev = oracle::max_standardized_deviation(acc.mean(), gram, R);
  v.pass = v.pass && dev <= 5.0;
  v.details.push_back(fmt("warped white noise vs white: max deviation %.2f SE over %ld atoms, 1e4 realizations", dev,
                          static_cast<long>(n_atoms)));
  v.summary = fmt("unitarity %.1e, composition %.1e (<= 1e-3); whiteness %.2f SE (<= 5)", worst_unit, worst_comp, dev);
  return v;
}

// 8. Modulation pipeline against the local-frequency baseline.
Verdict criterion8(const Options& o) {
  harness::ExperimentConfig c;
  c.seed = o.seed;
  const auto gamma = harness::sine_modulation(c.mod_length, c.mod_amplitude);
  const RVector truth = at_frames(gamma.gamma_prime, c.mod_hop);
  const PowerSpectrum S = harness::linear_bandpass_spectrum(c.mod_length, c.mod_band_lo, c.mod_band_hi, c.mod_band_taper);
  const EstimatorConfig cfg = c.modulation_estimator();
  std::vector<double> ep(o.mod_runs), eb(o.mod_runs);
  std::vector<int> conv(o.mod_runs);
  std::vector<std::string> errors(o.mod_runs);
  parallel_for(
      o.mod_runs,
      [&](std::size_t r) {
        const std::uint64_t seed = derive_seed(c.seed, {8, r});
        const Signal z = synth_stationary(S, c.mod_length, derive_seed(seed, {0}));
        const Signal y = apply_modulation(z, gamma, NoiseSpec{c.sigma0_sq()}, derive_seed(seed, {1}));
        try {
          const auto est = estimate_modulation(y, cfg);
          ep[r] = normalized_error(truth, est.gamma_prime_at_frames(), DeformationKind::modulation);
          eb[r] = normalized_error(truth, est.baseline_gamma_prime_at_frames(), DeformationKind::modulation);
          conv[r] = est.converged ? 1 : 0;
        } catch (const std::exception& e) {
          ep[r] = eb[r] = std::numeric_limits<double>::quiet_NaN();
          errors[r] = e.what();
        }
      },
      o.threads);
  double mean_p = 0.0, mean_b = 0.0;
  std::size_t wins = 0, converged = 0, failed = 0;
  for (std::size_t r = 0; r < o.mod_runs; ++r) {
    if (!errors[r].empty()) {
      ++failed;
      continue;
    }
    mean_p += ep[r];
    mean_b += eb[r];
    wins += ep[r] < eb[r] ? 1 : 0;
    converged += conv[r];
  }
  const std::size_t ok_runs = o.mod_runs - failed;
  mean_p /= static_cast<double>(std::max<std::size_t>(ok_runs, 1));
  mean_b /= static_cast<double>(std::max<std::size_t>(ok_runs, 1));
  Verdict v;
  const double win_frac = static_cast<double>(wins) / static_cast<double>(o.mod_runs);
  v.pass = failed == 0 && mean_p <= 0.10 && win_frac >= 0.90;
  v.summary = fmt("mean error %.4f (<= 0.10), baseline %.4f, proposed better in %zu/%zu runs (>= 90%%)", mean_p, mean_b,
                  wins, o.mod_runs);
  v.details.push_back(fmt("L=%zu, band [%.2f, %.2f], peak offset %.3f cycles/sample, SNR %.0f dB, converged %zu/%zu, "
                          "failed %zu",
                          c.mod_length, c.mod_band_lo, c.mod_band_hi, c.mod_amplitude, c.snr_db, converged, ok_runs,
                          failed));
  for (std::size_t r = 0; r < o.mod_runs; ++r)
    if (!errors[r].empty()) v.details.push_back(fmt("run %zu threw: %s", r, errors[r].c_str()));
  return v;
}

std::map<std::string, std::string> read_csvs(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".csv") continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    out[e.path().filename().string()] = s.str();
  }
  return out;
}

// 9. Byte-identical CSV output for every harness command under a fixed seed.
Verdict criterion9(const Options& o) {
  const fs::path root = fs::temp_directory_path() / "deform_acceptance_9";
  fs::remove_all(root);
  harness::ExperimentConfig base;
  base.seed = o.seed + 1000;
  base.length = 4096;
  base.voices = 25;
  base.scale_rows = 100;
  base.max_fine_shift = 25;
  base.wavelet_ks = {25};
  base.mod_length = 1024;
  base.mod_max_shift = 96;
  base.runs = 2;
  base.max_iters = 4;
  const std::string wav = (root / "engine.wav").string();
  fs::create_directories(root);
  harness::write_engine_wav(wav, 1 << 14, 16000, 1.5, base.seed);

  const std::vector<std::pair<std::string, std::function<void(harness::ExperimentConfig&)>>> commands{
      {"table1", [](harness::ExperimentConfig& c) { harness::write_table1(harness::run_table1(c)); }},
      {"warp-demo", [](harness::ExperimentConfig& c) { harness::run_demo(c); }},
      {"modulation-demo", [](harness::ExperimentConfig& c) { harness::run_demo(c); }},
      {"audio", [&wav](harness::ExperimentConfig& c) {
         c.input = wav;
         harness::run_audio(c);
       }}};
  Verdict v;
  v.pass = true;
  std::size_t files = 0;
  for (const auto& [name, run] : commands) {
    std::map<std::string, std::string> outputs[2];
    for (int rep = 0; rep < 2; ++rep) {
      harness::ExperimentConfig c = base;
      c.scenario = name;
      c.threads = rep == 0 ? 1 : 2;
      c.out_dir = (root / (name + "_" + std::to_string(rep))).string();
      run(c);
      outputs[rep] = read_csvs(c.out_dir);
    }
    const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
    v.pass = v.pass && same;
    files += outputs[0].size();
    v.details.push_back(fmt("%s: %zu CSV file(s) %s", name.c_str(), outputs[0].size(), same ? "identical" : "DIFFER"));
  }
  fs::remove_all(root);
  v.summary = fmt("%zu CSV files compared across reruns with 1 and 2 worker threads", files);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite for the deformation estimators"};
  int only = 0;
  Options o;
  app.add_option("--only", only, "Run a single criterion (1-9)")->check(CLI::Range(1, 9));
  app.add_option("--runs", o.runs, "Realizations per Table 1 cell");
  app.add_option("--mod-runs", o.mod_runs, "Realizations for the modulation criterion");
  app.add_option("--threads", o.threads, "Worker threads (0: hardware concurrency)");
  app.add_option("--seed", o.seed, "Master seed");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Verdict(const Options&)>> criteria{criterion1, criterion2, criterion3,
                                                                       criterion4, criterion5, criterion6,
                                                                       criterion7, criterion8, criterion9};
  bool all = true;
  for (int i = 1; i <= 9; ++i) {
    if (only != 0 && only != i) continue;
    Verdict v;
    try {
      v = criteria[static_cast<std::size_t>(i - 1)](o);
    } catch (const std::exception& e) {
      v.pass = false;
      v.summary = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %d: %s\n", v.pass ? "PASS" : "FAIL", i, v.summary.c_str());
    for (const auto& d : v.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
