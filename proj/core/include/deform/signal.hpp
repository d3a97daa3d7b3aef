#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "deform/interpolation.hpp"
#include "deform/types.hpp"

namespace deform {

/// Complex discrete signal with its sampling rate (1.0 for index-time work).
struct Signal {
  CVector samples;
  double fs = 1.0;

  std::size_t size() const { return samples.size(); }
  double energy() const;
  bool is_real() const;
};

/// Nonnegative per-bin variance over the L DFT bins: a stationary process
/// with this spectrum has covariance C[t,s] = sum_k S[k] exp(2 i pi k (t-s)/L).
class PowerSpectrum {
 public:
  PowerSpectrum() = default;
  explicit PowerSpectrum(RVector values);

  std::size_t size() const { return values_.size(); }
  const RVector& values() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }

  /// Total variance sum_k S[k].
  double variance() const;
  /// True when bins 0 and L/2 carry no power (circular analytic signal).
  bool analytic_compatible() const;
  /// Spectral density per unit normalized frequency at f (cycles/sample),
  /// linearly interpolated between bins; L * S[k] at f = k / L.
  double density(double f) const;

 private:
  RVector values_;
};

enum class DeformationKind { modulation, warp };

/// A deformation sampled on the signal grid t = 0..L-1.
///
/// For modulations gamma is in DFT-bin units (phase 2 pi gamma(t) / L), so
/// gamma' is an instantaneous frequency offset in bins. For warps gamma maps
/// observation time to source time. Periodic warps satisfy
/// gamma(t + L) = gamma(t) + L.
struct DeformationFunction {
  RVector gamma;
  RVector gamma_prime;
  DeformationKind kind = DeformationKind::warp;
  Boundary boundary = Boundary::periodic;

  std::size_t size() const { return gamma.size(); }

  /// gamma and gamma' at real t by cubic Hermite interpolation of the samples;
  /// periodic deformations are extended by their period increment, open ones
  /// linearly beyond the end samples.
  double value(double t) const;
  double derivative(double t) const;

  /// gamma(L) - gamma(0) for periodic deformations (sum of gamma' over a period).
  double period_increment() const;

  /// sup |gamma''|: spectral differentiation for periodic deformations, central
  /// differences otherwise.
  double max_abs_second_derivative() const;

  /// Throws std::invalid_argument when invariants fail: equal lengths, finite
  /// samples, and for warps a strictly positive derivative and increasing gamma.
  void validate() const;
};

/// Samples analytic gamma and gamma' on t = 0..length-1.
DeformationFunction sample_deformation(DeformationKind kind, std::size_t length, Boundary boundary,
                                       const std::function<double(double)>& gamma,
                                       const std::function<double(double)>& gamma_prime);

/// Builds gamma from samples of gamma' by integration with gamma(0) = gamma0.
/// Periodic input is integrated spectrally, open input with the trapezoid rule.
DeformationFunction deformation_from_derivative(DeformationKind kind, RVector gamma_prime,
                                                Boundary boundary, double gamma0 = 0.0);

struct NoiseSpec {
  double sigma0_sq = 0.0;
};

/// One realization of a circular complex wide-sense-stationary Gaussian signal.
Signal synth_stationary(const PowerSpectrum& spectrum, std::size_t length, std::uint64_t seed);

/// Analytic signal of a real input: DFT bins 1..L/2-1 doubled, every other bin
/// (including 0 and L/2) zeroed.
Signal analytic_signal(const Signal& x);

/// Orthogonal projection onto DFT bins 1..ceil(L/2)-1 (no doubling).
Signal project_positive_frequencies(const Signal& x);

Signal add_white_noise(Signal x, const NoiseSpec& noise, std::uint64_t seed);

/// Y[t] = Z[t] exp(2 i pi gamma(t) / L) + N[t].
Signal apply_modulation(const Signal& z, const DeformationFunction& gamma, const NoiseSpec& noise,
                        std::uint64_t seed);

/// Y[t] = sqrt(gamma'(t)) x(gamma(t)) + N[t]. Periodic deformations use
/// band-limited interpolation with periodic wrap of the source; open ones use
/// a cubic spline and require gamma to stay inside the source support.
Signal apply_warp(const Signal& x, const DeformationFunction& gamma, const NoiseSpec& noise,
                  std::uint64_t seed);

/// Reciprocal warp sampled on the same grid; the derivative is 1/gamma'(gamma^{-1}).
DeformationFunction invert_deformation(const DeformationFunction& gamma);

/// Composition (outer o inner)(t) = outer(inner(t)) on inner's grid.
DeformationFunction compose(const DeformationFunction& outer, const DeformationFunction& inner);

}  // namespace deform
