#include "deform/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "deform/fft.hpp"

namespace deform {

namespace {
constexpr double kModeNormalized = 0.25;

double normalized_alpha(const Wavelet& w) { return w.alpha * w.fs * w.fs; }

// Trapezoid log-frequency step: 1/16 of the log-domain width 1/sqrt(2k).
double log_step(const Wavelet& w, double per_width) {
  return 1.0 / (std::sqrt(2.0 * w.k) * per_width);
}
}  // namespace

double Wavelet::log_psi_hat_normalized(double f) const {
  if (!(f > 0.0)) return -std::numeric_limits<double>::infinity();
  const double an = normalized_alpha(*this);
  return k * std::log(f / kModeNormalized) - an * (f * f - kModeNormalized * kModeNormalized);
}

double Wavelet::psi_hat_normalized(double f) const {
  if (!(f > 0.0)) return 0.0;
  return std::exp(log_psi_hat_normalized(f));
}

std::pair<double, double> Wavelet::support(double rel) const {
  const double target = std::log(rel);
  auto solve = [&](double lo, double hi, bool rising) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const bool above = log_psi_hat_normalized(mid) > target;
      if (above == rising)
        hi = mid;
      else
        lo = mid;
    }
    return 0.5 * (lo + hi);
  };
  double top = 2.0 * kModeNormalized;
  while (log_psi_hat_normalized(top) > target) top *= 2.0;
  return {solve(1e-300, kModeNormalized, true), solve(kModeNormalized, top, false)};
}

Wavelet design_wavelet(int k, double fs) {
  if (k < 1) throw std::invalid_argument("design_wavelet: degree must be >= 1");
  if (!(fs > 0.0)) throw std::invalid_argument("design_wavelet: sampling rate must be positive");
  return Wavelet{k, 8.0 * k / (fs * fs), fs};
}

double ScaleGrid::scale(double m) const { return std::pow(q, m); }

void ScaleGrid::validate() const {
  if (!(q > 1.0)) throw std::invalid_argument("ScaleGrid: q must exceed 1");
  if (a == 0) throw std::invalid_argument("ScaleGrid: hop must be positive");
  if (count < 1) throw std::invalid_argument("ScaleGrid: need at least one scale");
  if (stride == 0) throw std::invalid_argument("ScaleGrid: stride must be positive");
}

ScaleGrid ScaleGrid::coarse(std::size_t offset) const {
  validate();
  ScaleGrid g = *this;
  const auto j = static_cast<double>(stride);
  g.q = std::pow(q, j);
  g.m_min = (m_min + static_cast<double>(offset)) / j;
  const auto avail = static_cast<std::size_t>(count) > offset ? static_cast<std::size_t>(count) - offset : 0;
  g.count = static_cast<int>((avail + stride - 1) / stride);
  g.stride = 1;
  return g;
}

bool TimeScaleTransform::any_flagged() const {
  return std::find(aliased.begin(), aliased.end(), true) != aliased.end() ||
         std::find(too_coarse.begin(), too_coarse.end(), true) != too_coarse.end();
}

namespace {

// Fraction of the wavelet energy lying above normalized frequency g.
class TailEnergy {
 public:
  explicit TailEnergy(const Wavelet& w) {
    const auto [lo, hi] = w.support(1e-14);
    lo_ = lo;
    hi_ = hi;
    constexpr std::size_t n = 4096;
    step_ = (hi - lo) / static_cast<double>(n - 1);
    tail_.assign(n, 0.0);
    for (std::size_t i = n - 1; i-- > 0;) {
      const double f0 = lo + step_ * static_cast<double>(i);
      const double p0 = w.psi_hat_normalized(f0);
      const double p1 = w.psi_hat_normalized(f0 + step_);
      tail_[i] = tail_[i + 1] + 0.5 * step_ * (p0 * p0 + p1 * p1);
    }
  }
  double fraction_above(double g) const {
    if (g >= hi_) return 0.0;
    if (g <= lo_) return 1.0;
    const double pos = (g - lo_) / step_;
    const auto i = std::min(static_cast<std::size_t>(pos), tail_.size() - 2);
    const double w = pos - static_cast<double>(i);
    return ((1.0 - w) * tail_[i] + w * tail_[i + 1]) / tail_[0];
  }

 private:
  double lo_, hi_, step_;
  RVector tail_;
};

}  // namespace

TimeScaleTransform cwt(const Signal& x, const Wavelet& wavelet, const ScaleGrid& grid,
                       double alias_tolerance) {
  grid.validate();
  const std::size_t L = x.size();
  if (L < 2) throw std::invalid_argument("cwt: signal too short");
  if (L % grid.a != 0) throw std::invalid_argument("cwt: hop must divide the signal length");
  for (const auto& v : x.samples)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("cwt: non-finite sample");
  const std::size_t N = L / grid.a;
  const auto rows = static_cast<std::size_t>(grid.count);
  const auto Ld = static_cast<double>(L);

  TimeScaleTransform W;
  W.coeffs.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(N));
  W.grid = grid;
  W.wavelet = wavelet;
  W.length = L;
  W.aliased.assign(rows, false);
  W.too_coarse.assign(rows, false);

  const CVector X = fft::forward_copy(x.samples);
  const auto [f_lo, f_hi] = wavelet.support(1e-17);
  const TailEnergy tail(wavelet);
  const std::size_t k_top = (L + 1) / 2;  // bins 1 .. k_top - 1
  CVector h(N);
  for (std::size_t r = 0; r < rows; ++r) {
    const double s = grid.scale(grid.m_min + static_cast<double>(r));
    const double amp = std::sqrt(s);
    W.aliased[r] = tail.fraction_above(0.5 * s) > alias_tolerance;
    W.too_coarse[r] = (f_hi - f_lo) / s * Ld < 4.0;
    const auto k_lo = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(f_lo / s * Ld)));
    const double k_hi_d = std::floor(f_hi / s * Ld);
    const std::size_t k_hi = std::min<std::size_t>(k_top - 1, k_hi_d < 0 ? 0 : static_cast<std::size_t>(k_hi_d));
    std::fill(h.begin(), h.end(), cplx{0.0, 0.0});
    for (std::size_t k = k_lo; k <= k_hi; ++k)
      h[k % N] += X[k] * (amp * wavelet.psi_hat_normalized(s * static_cast<double>(k) / Ld));
    fft::inverse(h);
    for (std::size_t n = 0; n < N; ++n)
      W.coeffs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(n)) = h[n] / Ld;
  }
  return W;
}

RVector local_scale(const TimeScaleTransform& W) {
  const auto rows = W.coeffs.rows();
  const auto N = W.coeffs.cols();
  RVector out(static_cast<std::size_t>(N), std::numeric_limits<double>::quiet_NaN());
  RVector scales(static_cast<std::size_t>(rows));
  for (Eigen::Index r = 0; r < rows; ++r)
    scales[static_cast<std::size_t>(r)] = W.grid.scale(W.grid.m_min + static_cast<double>(r));
  for (Eigen::Index n = 0; n < N; ++n) {
    double num = 0.0, den = 0.0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double e = std::norm(W.coeffs(r, n));
      num += scales[static_cast<std::size_t>(r)] * e;
      den += e;
    }
    if (den > 0.0) out[static_cast<std::size_t>(n)] = num / den;
  }
  return out;
}

namespace {

// Columns of q^{m/2} psi_hat(q^m nu) sampled on a log-frequency trapezoid grid,
// weighted so that A^T A is the covariance integral.
Eigen::MatrixXd log_grid_design(const SpectralDensity& density, const Wavelet& wavelet,
                                const ScaleGrid& grid, double delta) {
  grid.validate();
  const auto rows = static_cast<std::size_t>(grid.count);
  RVector scales(rows);
  for (std::size_t r = 0; r < rows; ++r) scales[r] = grid.scale(grid.m_min + static_cast<double>(r) + delta);
  const auto [f_lo, f_hi] = wavelet.support(1e-12);
  const double s_min = *std::min_element(scales.begin(), scales.end());
  const double s_max = *std::max_element(scales.begin(), scales.end());
  const double u0 = std::log(f_lo / s_max);
  const double u1 = std::log(f_hi / s_min);
  const double h = log_step(wavelet, 16.0);
  const auto nodes = static_cast<std::size_t>(std::ceil((u1 - u0) / h)) + 1;
  const double step = (u1 - u0) / static_cast<double>(nodes - 1);
  Eigen::MatrixXd A(static_cast<Eigen::Index>(nodes), static_cast<Eigen::Index>(rows));
  for (std::size_t i = 0; i < nodes; ++i) {
    const double u = u0 + step * static_cast<double>(i);
    const double nu = std::exp(u);
    const double d = density(nu);
    if (!std::isfinite(d)) throw NumericalError("wavelet_cov: non-finite spectral density");
    if (d < 0.0) throw NumericalError("wavelet_cov: negative spectral density");
    const double wt = (i == 0 || i + 1 == nodes) ? 0.5 * step : step;
    const double base = std::sqrt(wt * d * nu);
    for (std::size_t r = 0; r < rows; ++r)
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)) =
          base * std::sqrt(scales[r]) * wavelet.psi_hat_normalized(scales[r] * nu);
  }
  return A;
}

Eigen::MatrixXcd gram(const Eigen::MatrixXd& A) {
  Eigen::MatrixXd C = A.transpose() * A;
  C = 0.5 * (C + C.transpose());
  return C.cast<cplx>();
}

}  // namespace

WaveletSliceCovariance wavelet_cov(const SpectralDensity& density, const Wavelet& wavelet,
                                   const ScaleGrid& grid, double delta, double sigma0_sq) {
  WaveletSliceCovariance out;
  out.delta = delta;
  out.C_X = gram(log_grid_design(density, wavelet, grid, delta));
  out.C_N = gram(log_grid_design([sigma0_sq](double) { return sigma0_sq; }, wavelet, grid, 0.0));
  return out;
}

Eigen::MatrixXcd wavelet_cov_bins(const PowerSpectrum& spectrum, const Wavelet& wavelet,
                                  const ScaleGrid& grid, double delta) {
  grid.validate();
  const std::size_t L = spectrum.size();
  const auto Ld = static_cast<double>(L);
  const auto rows = static_cast<std::size_t>(grid.count);
  std::vector<std::size_t> bins;
  for (std::size_t k = 1; 2 * k < L; ++k)
    if (spectrum[k] > 0.0) bins.push_back(k);
  Eigen::MatrixXd A(static_cast<Eigen::Index>(bins.size()), static_cast<Eigen::Index>(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    const double s = grid.scale(grid.m_min + static_cast<double>(r) + delta);
    for (std::size_t i = 0; i < bins.size(); ++i) {
      const double f = static_cast<double>(bins[i]) / Ld;
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)) =
          std::sqrt(spectrum[bins[i]] * s) * wavelet.psi_hat_normalized(s * f);
    }
  }
  return gram(A);
}

namespace {

struct MellinNodes {
  RVector u;
  RVector weight;  // step * psi_hat(e^u) e^{u/2}
};

MellinNodes mellin_nodes(const Wavelet& wavelet) {
  const auto [f_lo, f_hi] = wavelet.support(1e-16);
  const double u0 = std::log(f_lo);
  const double u1 = std::log(f_hi);
  const double h = log_step(wavelet, 32.0);
  const auto n = static_cast<std::size_t>(std::ceil((u1 - u0) / h)) + 1;
  const double step = (u1 - u0) / static_cast<double>(n - 1);
  MellinNodes m;
  m.u.resize(n);
  m.weight.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = u0 + step * static_cast<double>(i);
    m.u[i] = u;
    m.weight[i] = step * std::exp(wavelet.log_psi_hat_normalized(std::exp(u)) + 0.5 * u);
  }
  return m;
}

// Nodes are equispaced, so the phase advances by a fixed rotation; it is
// recomputed exactly every 64 nodes to bound rounding drift.
cplx mellin_at(const MellinNodes& m, double s) {
  const std::size_t n = m.u.size();
  if (n == 0) return {0.0, 0.0};
  const double step = n > 1 ? m.u[1] - m.u[0] : 0.0;
  const cplx rot = std::polar(1.0, -kTwoPi * s * step);
  cplx acc{0.0, 0.0};
  cplx phase;
  for (std::size_t i = 0; i < n; ++i) {
    phase = (i % 64 == 0) ? std::polar(1.0, -kTwoPi * s * m.u[i]) : phase * rot;
    acc += m.weight[i] * phase;
  }
  return acc;
}

}  // namespace

cplx mellin_transform(const Wavelet& wavelet, double s) { return mellin_at(mellin_nodes(wavelet), s); }

double mellin_condition_Kpsi(const Wavelet& wavelet, double q_coarse) {
  if (!(q_coarse > 1.0)) throw std::invalid_argument("mellin_condition_Kpsi: q must exceed 1");
  const MellinNodes nodes = mellin_nodes(wavelet);
  const double lnq = std::log(q_coarse);
  const double period = 1.0 / lnq;
  auto periodized = [&](double s) {
    double sum = std::norm(mellin_at(nodes, s));
    for (int l = 1; l < 100000; ++l) {
      const double up = std::norm(mellin_at(nodes, s + l * period));
      const double down = std::norm(mellin_at(nodes, s - l * period));
      sum += up + down;
      if (up + down <= 1e-10 * sum) break;
    }
    if (!std::isfinite(sum)) throw NumericalError("mellin_condition_Kpsi: non-finite sum");
    return sum;
  };
  constexpr int scan = 128;
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  RVector vals(scan);
  for (int i = 0; i < scan; ++i) {
    vals[static_cast<std::size_t>(i)] = periodized(period * i / scan);
    if (vals[static_cast<std::size_t>(i)] < best_val) {
      best_val = vals[static_cast<std::size_t>(i)];
      best = i;
    }
  }
  // Golden-section refinement on the bracket around the best scan point.
  double lo = period * (best - 1) / scan;
  double hi = period * (best + 1) / scan;
  constexpr double phi = 0.6180339887498949;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = periodized(x1), f2 = periodized(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = periodized(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = periodized(x2);
    }
  }
  best_val = std::min({best_val, f1, f2});
  return best_val / lnq;
}

std::size_t choose_coarse_stride(const Wavelet& wavelet, double q_fine, std::size_t max_stride, double rel) {
  if (max_stride == 0) throw std::invalid_argument("choose_coarse_stride: max_stride must be positive");
  RVector K(max_stride);
  double top = 0.0;
  for (std::size_t j = 1; j <= max_stride; ++j) {
    K[j - 1] = mellin_condition_Kpsi(wavelet, std::pow(q_fine, static_cast<double>(j)));
    top = std::max(top, K[j - 1]);
  }
  for (std::size_t j = 1; j <= max_stride; ++j)
    if (K[j - 1] >= rel * top) return j;
  return max_stride;
}

double spectral_decay_moment(const SpectralDensity& density, double alpha, std::size_t nodes) {
  if (nodes < 2) throw std::invalid_argument("spectral_decay_moment: need at least 2 nodes");
  const double p = 2.0 - 6.0 / (alpha + 2.0);
  const double step = 0.5 / static_cast<double>(nodes - 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double nu = step * static_cast<double>(i);
    const double w = (i == 0 || i + 1 == nodes) ? 0.5 : 1.0;
    const double v = nu > 0.0 ? std::pow(nu, p) * density(nu) : 0.0;
    acc += w * v;
  }
  return acc * step;
}

TimeScaleTransform warped_wavelet_transform(const Signal& y, const DeformationFunction& gamma_hat,
                                            const Wavelet& wavelet, const ScaleGrid& grid,
                                            WarpedTransformMethod method) {
  if (gamma_hat.size() != y.size())
    throw std::invalid_argument("warped_wavelet_transform: length mismatch");
  if (method == WarpedTransformMethod::resample) {
    const Signal u = apply_warp(y, invert_deformation(gamma_hat), NoiseSpec{}, 0);
    return cwt(u, wavelet, grid);
  }
  gamma_hat.validate();
  TimeScaleTransform W = cwt(Signal{CVector(y.size()), y.fs}, wavelet, grid);
  const std::size_t L = y.size();
  const std::size_t N = L / grid.a;
  const auto Ld = static_cast<double>(L);
  const auto [f_lo, f_hi] = wavelet.support(1e-17);
  W.coeffs.setZero();
  CVector atom(N);
  for (Eigen::Index r = 0; r < W.coeffs.rows(); ++r) {
    const double s = grid.scale(grid.m_min + static_cast<double>(r));
    const auto k_lo = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(f_lo / s * Ld)));
    const std::size_t k_hi = std::min<std::size_t>((L + 1) / 2 - 1, static_cast<std::size_t>(std::floor(f_hi / s * Ld)));
    RVector c;
    for (std::size_t k = k_lo; k <= k_hi; ++k)
      c.push_back(std::sqrt(s) * wavelet.psi_hat_normalized(s * static_cast<double>(k) / Ld) / Ld);
    for (std::size_t t = 0; t < L; ++t) {
      std::fill(atom.begin(), atom.end(), cplx{0.0, 0.0});
      const double g = gamma_hat.gamma[t];
      for (std::size_t k = k_lo; k <= k_hi; ++k)
        atom[k % N] += c[k - k_lo] * std::polar(1.0, kTwoPi * static_cast<double>(k) * g / Ld);
      fft::forward(atom);  // atom[n] = psi_mn(gamma(t))
      const cplx yt = y.samples[t] * std::sqrt(gamma_hat.gamma_prime[t]);
      for (std::size_t n = 0; n < N; ++n) W.coeffs(r, static_cast<Eigen::Index>(n)) += yt * std::conj(atom[n]);
    }
  }
  return W;
}

}  // namespace deform
