#include "deform/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "deform/covariance.hpp"
#include "deform/parallel.hpp"
#include "deform/shift_search.hpp"
#include "deform/spectrum.hpp"

namespace deform {

void EstimatorConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("EstimatorConfig: epsilon must be positive");
  if (max_iters < 1) throw std::invalid_argument("EstimatorConfig: max_iters must be >= 1");
  if (noise_mode == NoiseMode::known && sigma0_sq < 0.0)
    throw std::invalid_argument("EstimatorConfig: sigma0_sq must be >= 0");
  if (!(stride_rel > 0.0 && stride_rel <= 1.0)) throw std::invalid_argument("EstimatorConfig: stride_rel must lie in (0, 1]");
  warp.grid.validate();
  if (warp.wavelet_k < 1) throw std::invalid_argument("EstimatorConfig: wavelet degree must be >= 1");
  if (warp.window_count == 0) throw std::invalid_argument("EstimatorConfig: empty scale window");
  if (warp.window_lo + warp.window_count > static_cast<std::size_t>(warp.grid.count))
    throw std::invalid_argument("EstimatorConfig: scale window exceeds the grid");
  if (modulation.hop == 0 || modulation.freq_step == 0)
    throw std::invalid_argument("EstimatorConfig: Gabor hop and step must be positive");
}

RVector DeformationEstimate::gamma_prime_at_frames() const { return at_frames(gamma_hat.gamma_prime, hop); }

RVector DeformationEstimate::baseline_gamma_prime_at_frames() const {
  RVector out(initial_delta.size());
  for (std::size_t n = 0; n < out.size(); ++n)
    out[n] = kind == DeformationKind::warp ? std::pow(fine_unit, initial_delta[n]) : initial_delta[n] * fine_unit;
  return out;
}

std::size_t choose_gabor_stride(const GaborFrame& fine_frame, std::size_t max_stride, double rel) {
  fine_frame.validate();
  const std::size_t L = fine_frame.L();
  std::vector<std::pair<std::size_t, double>> K;
  double top = 0.0;
  for (std::size_t j = 1; j <= max_stride; ++j) {
    const std::size_t b = j * fine_frame.b;
    if (L % b != 0) continue;
    GaborFrame coarse = fine_frame;
    coarse.b = b;
    const double kg = window_condition_Kg(coarse);
    K.emplace_back(j, kg);
    top = std::max(top, kg);
  }
  if (K.empty()) return 1;
  for (const auto& [j, kg] : K)
    if (kg >= rel * top) return j;
  return K.back().first;
}

namespace {

struct CosetLayout {
  std::size_t stride = 1;
  std::size_t base = 0;
  std::size_t count = 1;
  int max_shift = 0;
  int sign = 1;
};

// Factorized covariances of the reference coset-0 block moved by s coarse points.
class CosetFamily {
 public:
  CosetFamily(const Eigen::MatrixXcd& reference, const CosetLayout& lay) {
    const std::size_t j = lay.stride;
    const auto rows = static_cast<std::size_t>(reference.rows());
    const std::size_t r0 = lay.base % j;
    const std::size_t n_coarse = (rows - 1 - r0) / j + 1;
    const auto l_base = static_cast<int>(lay.base / j);
    Eigen::MatrixXcd sub(static_cast<Eigen::Index>(n_coarse), reference.cols());
    for (std::size_t l = 0; l < n_coarse; ++l) sub.row(static_cast<Eigen::Index>(l)) = reference.row(static_cast<Eigen::Index>(r0 + l * j));
    const Eigen::MatrixXcd full = sample_covariance_matrix(sub);
    const int reach = (lay.max_shift + static_cast<int>(j) - 1) / static_cast<int>(j) + 1;
    s_min_ = std::max(-l_base, -reach);
    s_max_ = std::min(static_cast<int>(n_coarse) - static_cast<int>(lay.count) - l_base, reach);
    if (s_min_ > s_max_) throw std::invalid_argument("estimator: reference transform too small for the coset block");
    const auto K = static_cast<Eigen::Index>(lay.count);
    for (int s = s_min_; s <= s_max_; ++s) {
      const Eigen::Index start = l_base + s;
      covs_.emplace_back(full.block(start, start, K, K));
    }
  }
  int s_min() const { return s_min_; }
  int s_max() const { return s_max_; }
  const HermitianCov& at(int s) const { return covs_.at(static_cast<std::size_t>(s - s_min_)); }

 private:
  int s_min_ = 0;
  int s_max_ = 0;
  std::vector<HermitianCov> covs_;
};

struct FrameShifts {
  RVector delta;
  double mean_value = 0.0;
};

FrameShifts refine_frames(const Eigen::MatrixXcd& observed, const CosetFamily& family, const CosetLayout& lay,
                          std::size_t threads) {
  SubgridProblem p;
  p.stride = lay.stride;
  p.base = lay.base;
  p.count = lay.count;
  p.max_fine_shift = lay.max_shift;
  p.sign = lay.sign;
  p.s_min = family.s_min();
  p.s_max = family.s_max();
  p.family = [&family](int s) -> const HermitianCov& { return family.at(s); };
  const auto N = static_cast<std::size_t>(observed.cols());
  FrameShifts out;
  out.delta.assign(N, 0.0);
  RVector values(N, 0.0);
  parallel_for(
      N,
      [&](std::size_t n) {
        const SubgridResult r = subgrid_refine(observed.col(static_cast<Eigen::Index>(n)), p);
        out.delta[n] = r.delta;
        values[n] = r.value;
      },
      threads);
  for (double v : values) out.mean_value += v;
  out.mean_value /= static_cast<double>(N);
  return out;
}

double relative_change(const RVector& previous, const RVector& next) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < next.size(); ++i) {
    num += (previous[i] - next[i]) * (previous[i] - next[i]);
    den += next[i] * next[i];
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

// Alternates covariance re-estimation (through `reference`) with per-frame
// subgrid searches until the relative change of the shifts drops below epsilon.
template <class Reference>
void iterate(DeformationEstimate& est, const Eigen::MatrixXcd& observed, const CosetLayout& lay,
             const EstimatorConfig& cfg, Reference&& reference) {
  RVector delta = est.initial_delta;
  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    const Eigen::MatrixXcd ref = reference(delta);
    const CosetFamily family(ref, lay);
    FrameShifts next = refine_frames(observed, family, lay, cfg.threads);
    anchor_shifts(next.delta);
    IterationRecord rec;
    rec.criterion = relative_change(delta, next.delta);
    rec.mean_quadratic_form = next.mean_value;
    rec.delta = next.delta;
    est.iterations.push_back(rec);
    delta = std::move(next.delta);
    if (rec.criterion < cfg.epsilon) {
      est.converged = true;
      break;
    }
  }
  std::size_t best = est.iterations.size() - 1;
  if (!est.converged) {
    for (std::size_t i = 0; i < est.iterations.size(); ++i)
      if (est.iterations[i].criterion < est.iterations[best].criterion) best = i;
  }
  est.best_iteration = best;
  est.delta = est.iterations[best].delta;
}

}  // namespace

DeformationEstimate estimate_warping(const Signal& y, const EstimatorConfig& cfg) {
  cfg.validate();
  const std::size_t L = y.size();
  ScaleGrid grid = cfg.warp.grid;
  if (L % grid.a != 0) throw std::invalid_argument("estimate_warping: hop must divide the signal length");
  const Wavelet wavelet = design_wavelet(cfg.warp.wavelet_k, 1.0);
  const std::size_t j = cfg.stride > 0 ? cfg.stride
                                       : choose_coarse_stride(wavelet, grid.q, cfg.warp.max_stride, cfg.stride_rel);
  grid.stride = j;
  const auto margin = static_cast<std::size_t>(cfg.warp.max_fine_shift) + j;
  ScaleGrid ref_grid = grid;
  ref_grid.m_min = grid.m_min - static_cast<double>(margin);
  ref_grid.count = grid.count + 2 * static_cast<int>(margin);
  CosetLayout lay;
  lay.stride = j;
  lay.base = margin + cfg.warp.window_lo;
  lay.count = cfg.warp.window_count / j;
  lay.max_shift = cfg.warp.max_fine_shift;
  lay.sign = 1;
  if (lay.count == 0) throw std::invalid_argument("estimate_warping: stride exceeds the scale window");

  DeformationEstimate est;
  est.kind = DeformationKind::warp;
  est.stride = j;
  est.hop = grid.a;
  est.fine_unit = grid.q;

  if (cfg.noise_mode == NoiseMode::known) {
    est.sigma0_sq = cfg.sigma0_sq;
  } else {
    const auto [f_lo, f_hi] = wavelet.support(1e-6);
    const PowerSpectrum S = welch_spectrum(y, std::min<std::size_t>(L, 1024), 0.5);
    est.sigma0_sq = noise_floor(S, f_lo / grid.scale(grid.m_max()), f_hi / grid.scale(grid.m_min),
                                cfg.boundary == Boundary::periodic);
  }

  const TimeScaleTransform WY = cwt(y, wavelet, ref_grid);
  TimeScaleTransform analysis = WY;
  analysis.grid = grid;
  analysis.coeffs = WY.coeffs.middleRows(static_cast<Eigen::Index>(margin), grid.count);
  RVector ls = local_scale(analysis);
  fill_missing_linear(ls);
  est.initial_delta.resize(ls.size());
  const double lnq = std::log(grid.q);
  for (std::size_t n = 0; n < ls.size(); ++n) est.initial_delta[n] = -std::log(ls[n]) / lnq;
  anchor_shifts(est.initial_delta);

  const FrameLayout frames{grid.a, L, cfg.boundary};
  iterate(est, WY.coeffs, lay, cfg, [&](const RVector& delta) {
    const IntegratedDeformation g = integrate_deformation(delta, frames, DeformationKind::warp, grid.q);
    const Signal u = apply_warp(y, invert_deformation(g.gamma), NoiseSpec{}, 0);
    return cwt(u, wavelet, ref_grid).coeffs;
  });

  IntegratedDeformation g = integrate_deformation(est.delta, frames, DeformationKind::warp, grid.q);
  est.gamma_hat = std::move(g.gamma);
  est.anchor = g.anchor;
  est.slope_floor_applied = g.slope_floor_applied;
  return est;
}

DeformationEstimate estimate_modulation(const Signal& y, const EstimatorConfig& cfg) {
  cfg.validate();
  const std::size_t L = y.size();
  const ModulationSettings& ms = cfg.modulation;
  const GaborFrame frame = make_gabor_frame(L, ms.hop, ms.freq_step, ms.window_std);
  const std::size_t M = frame.M();
  const std::size_t j = cfg.stride > 0 ? cfg.stride : choose_gabor_stride(frame, ms.max_stride, cfg.stride_rel);
  const std::size_t band_count = ms.band_count > 0 ? ms.band_count : M / 4;
  const std::size_t band_lo = ms.band_count > 0 ? ms.band_lo : M / 8;
  if (band_lo + band_count > M) throw std::invalid_argument("estimate_modulation: band exceeds the frequency grid");
  CosetLayout lay;
  lay.stride = j;
  lay.base = band_lo;
  lay.count = band_count / j;
  lay.max_shift = ms.max_fine_shift > 0 ? ms.max_fine_shift : static_cast<int>(M / 4);
  lay.sign = -1;
  if (lay.count == 0) throw std::invalid_argument("estimate_modulation: stride exceeds the band");

  DeformationEstimate est;
  est.kind = DeformationKind::modulation;
  est.stride = j;
  est.hop = ms.hop;
  est.fine_unit = static_cast<double>(ms.freq_step);

  const TimeFreqTransform GY = dgt(y, frame);
  if (cfg.noise_mode == NoiseMode::known) {
    est.sigma0_sq = cfg.sigma0_sq;
  } else {
    const double lo = static_cast<double>(band_lo * ms.freq_step) / static_cast<double>(L);
    const double hi = static_cast<double>((band_lo + band_count) * ms.freq_step) / static_cast<double>(L);
    const PowerSpectrum S = welch_spectrum(y, std::min<std::size_t>(L, 1024), 0.5);
    est.sigma0_sq = noise_floor(S, lo, hi, true);
  }

  // Baseline over the positive-frequency half of the grid.
  TimeFreqTransform positive{GY.coeffs.topRows(static_cast<Eigen::Index>((M + 1) / 2)), frame};
  RVector nu = local_frequency(positive);
  fill_missing_linear(nu);
  est.initial_delta.resize(nu.size());
  for (std::size_t n = 0; n < nu.size(); ++n) est.initial_delta[n] = nu[n] / static_cast<double>(ms.freq_step);
  anchor_shifts(est.initial_delta);

  const FrameLayout frames{ms.hop, L, cfg.boundary};
  const auto step = static_cast<double>(ms.freq_step);
  iterate(est, GY.coeffs, lay, cfg, [&](const RVector& delta) {
    const IntegratedDeformation g = integrate_deformation(delta, frames, DeformationKind::modulation, step);
    return dgt(demodulate(y, g.gamma), frame).coeffs;
  });

  IntegratedDeformation g = integrate_deformation(est.delta, frames, DeformationKind::modulation, step);
  est.gamma_hat = std::move(g.gamma);
  est.anchor = g.anchor;
  return est;
}

}  // namespace deform
