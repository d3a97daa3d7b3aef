#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "deform/signal.hpp"
#include "deform/types.hpp"

namespace deform {

/// Analytic derivative-of-Gaussian wavelet psi_hat(nu) = C nu^k exp(-alpha nu^2)
/// on nu > 0, scaled to peak value 1 at its mode fs/4.
struct Wavelet {
  int k = 4;
  double alpha = 32.0;  // 8 k / fs^2
  double fs = 1.0;

  double mode() const { return 0.25 * fs; }
  /// psi_hat at a frequency in Hz.
  double psi_hat(double nu) const { return psi_hat_normalized(nu / fs); }
  /// psi_hat at a normalized frequency f = nu / fs (cycles per sample).
  double psi_hat_normalized(double f) const;
  /// log psi_hat_normalized(f) for f > 0; -inf otherwise.
  double log_psi_hat_normalized(double f) const;
  /// Normalized frequencies [lo, hi] outside which psi_hat < rel * peak.
  std::pair<double, double> support(double rel = 1e-12) const;
};

Wavelet design_wavelet(int k, double fs = 1.0);

/// Scales q^m for m = m_min .. m_min + count - 1, frames at t = n a.
/// Scale index 0 puts the wavelet mode at fs/4; larger m analyses lower
/// frequencies. `stride` is the coarse sub-grid step used by the ML search.
struct ScaleGrid {
  double q = 1.0099504938362078;  // 2^(1/70)
  std::size_t a = 64;
  double m_min = 0.0;
  int count = 280;
  std::size_t stride = 1;

  double scale(double m) const;
  double m_max() const { return m_min + count - 1; }
  void validate() const;
  /// The grid of ratio q^stride holding every stride-th scale from m_min + offset.
  ScaleGrid coarse(std::size_t offset = 0) const;
};

/// Rows follow grid scales m_min..m_max; columns are frames n = 0..L/a - 1.
struct TimeScaleTransform {
  Eigen::MatrixXcd coeffs;
  ScaleGrid grid;
  Wavelet wavelet;
  std::size_t length = 0;
  /// Scales whose dilated wavelet leaks more than the alias tolerance of its
  /// energy above Nyquist.
  std::vector<bool> aliased;
  /// Scales whose passband covers fewer than four DFT bins.
  std::vector<bool> too_coarse;

  bool any_flagged() const;
};

/// W[m,n] = <x, psi_mn>, psi_mn(t) = q^{-m/2} psi(q^{-m}(t - n a)), computed in
/// the frequency domain as (1/L) sum_k X[k] q^{m/2} psi_hat(q^m k/L) e^{2 i pi k n a/L}
/// over the positive bins 1 .. ceil(L/2) - 1.
TimeScaleTransform cwt(const Signal& x, const Wavelet& wavelet, const ScaleGrid& grid,
                       double alias_tolerance = 1e-6);

/// Energy-weighted mean scale q^m per frame; NaN for empty columns.
RVector local_scale(const TimeScaleTransform& W);

/// Spectral density per unit normalized frequency (variance = integral over [0, 1)).
using SpectralDensity = std::function<double(double)>;

struct WaveletSliceCovariance {
  Eigen::MatrixXcd C_X;
  Eigen::MatrixXcd C_N;
  double delta = 0.0;

  Eigen::MatrixXcd combined() const { return C_X + C_N; }
};

/// C[m,m'] = q^{(m+m')/2} int_0^inf S(nu) psi_hat(q^m nu) psi_hat(q^m' nu) dnu at
/// shifted indices m + delta, m' + delta, by the trapezoid rule on a log-frequency
/// grid. The noise part uses S = sigma0_sq.
WaveletSliceCovariance wavelet_cov(const SpectralDensity& density, const Wavelet& wavelet,
                                   const ScaleGrid& grid, double delta, double sigma0_sq);

/// Exact covariance of cwt slices of the analytic process with per-bin spectrum S
/// (a finite sum over DFT bins instead of the frequency integral).
Eigen::MatrixXcd wavelet_cov_bins(const PowerSpectrum& spectrum, const Wavelet& wavelet,
                                  const ScaleGrid& grid, double delta = 0.0);

/// Mellin transform int_0^inf psi_hat(nu) nu^{-2 i pi s} dnu / sqrt(nu) (normalized
/// frequency), by quadrature in log-frequency.
cplx mellin_transform(const Wavelet& wavelet, double s);

/// K_psi = (1/ln Q) inf_{s} sum_l |mellin(s + l / ln Q)|^2; a lower bound on the
/// eigenvalues of the white-noise slice covariance (unit variance) on a grid of
/// ratio Q.
double mellin_condition_Kpsi(const Wavelet& wavelet, double q_coarse);

/// Smallest stride j in [1, max_stride] whose K_psi(q^j) reaches rel times the
/// largest value over that range.
std::size_t choose_coarse_stride(const Wavelet& wavelet, double q_fine, std::size_t max_stride,
                                 double rel = 1e-3);

/// rho_X(alpha) = int_0^{1/2} nu^{2 - 6/(alpha + 2)} S(nu) dnu.
double spectral_decay_moment(const SpectralDensity& density, double alpha, std::size_t nodes = 4096);

enum class WarpedTransformMethod { resample, atoms };

/// Transform of y analysed against warped atoms D_gamma psi_mn, i.e. the cwt of
/// the unwarped signal D_{gamma^{-1}} y. `resample` unwarps y then runs cwt;
/// `atoms` evaluates the inner products directly (quadratic cost, for checks).
TimeScaleTransform warped_wavelet_transform(const Signal& y, const DeformationFunction& gamma_hat,
                                            const Wavelet& wavelet, const ScaleGrid& grid,
                                            WarpedTransformMethod method = WarpedTransformMethod::resample);

}  // namespace deform
