#pragma once

#include <Eigen/Dense>

#include "deform/signal.hpp"
#include "deform/types.hpp"

namespace deform {

/// Window g of length L with hop a and frequency step b (both dividing L).
struct GaborFrame {
  CVector g;
  std::size_t a = 1;
  std::size_t b = 1;

  std::size_t L() const { return g.size(); }
  std::size_t M() const { return g.size() / b; }
  std::size_t N() const { return g.size() / a; }

  /// Throws std::invalid_argument on divisor violations or a zero window.
  void validate() const;
};

/// Periodized Gaussian window of unit l2 norm centred at t = 0.
/// std_dev <= 0 selects std_dev = a.
GaborFrame make_gabor_frame(std::size_t L, std::size_t a, std::size_t b, double std_dev = 0.0);

/// M x N coefficients; column n is the frequency slice at time n a.
struct TimeFreqTransform {
  Eigen::MatrixXcd coeffs;
  GaborFrame frame;
};

/// G[m,n] = sum_t x[t] exp(-2 i pi m b (t - n a) / L) conj(g[t - n a]).
TimeFreqTransform dgt(const Signal& x, const GaborFrame& frame);

/// Same sum at an arbitrary real frequency nu (bins) for frame n, with
/// t - n a taken on the centred interval [-L/2, L/2).
cplx dgt_semicontinuous(const Signal& x, const GaborFrame& frame, double nu, std::size_t n);

/// Energy-weighted mean frequency (bins) per frame. Columns without energy
/// give NaN; throws when every column is empty.
RVector local_frequency(const TimeFreqTransform& G);

/// Replaces NaN entries by linear interpolation between finite neighbours
/// (constant extrapolation at the ends).
void fill_missing_linear(RVector& values);

/// Covariance of a Gabor slice of circular white noise with variance sigma0_sq:
/// C[m,m'] = sigma0_sq sum_u |g[u]|^2 exp(2 i pi (m' - m) u / M).
Eigen::MatrixXcd noise_cov(const GaborFrame& frame, double sigma0_sq);

/// Covariance of a Gabor slice of the analytic process with per-bin spectrum S:
/// C[m,m'] = sum_{k in I+} S[k] conj(ghat[k - m b]) ghat[k - m' b].
Eigen::MatrixXcd analytic_cov(const PowerSpectrum& spectrum, const GaborFrame& frame);

/// Window spectrum ghat(xi) = sum_{u in I^c} g[u] exp(-2 i pi xi u / L) at
/// xi = j + frac for j = 0..L-1 (index j mod L).
CVector window_spectrum(const GaborFrame& frame, double frac = 0.0);

struct GaborSliceCovariance {
  Eigen::MatrixXcd C_Z;
  Eigen::MatrixXcd C_N;
  double delta = 0.0;

  Eigen::MatrixXcd combined() const { return C_Z + C_N; }
};

/// Signal part evaluated at frequency-shifted arguments,
/// C_Z(delta)[m,m'] = sum_{k in I+} S[k] conj(ghat(k - m b + delta b)) ghat(k - m' b + delta b),
/// plus the unshifted noise part.
GaborSliceCovariance shifted_cov(const PowerSpectrum& spectrum, const GaborFrame& frame,
                                 double sigma0_sq, double delta);

/// K_g = (1/b) min_{t < M} sum_{k < b} |g[t + k M]|^2.
double window_condition_Kg(const GaborFrame& frame);

struct RemainderBound {
  double bound = 0.0;
  double T = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double gamma_second_sup = 0.0;
  bool hypothesis_ok = true;  // L > 4 / (pi sup|gamma''|)
};

/// Remainder bound sigma_Z^2 (2 mu1 + (pi e / L) sup|gamma''| mu2)^2 for the
/// shifted-slice approximation of a modulated Gabor slice. An affine gamma
/// gives an exact shift and a zero bound.
RemainderBound shift_remainder_bound(const GaborFrame& frame, const DeformationFunction& gamma,
                             double sigma_Z_sq);

}  // namespace deform
