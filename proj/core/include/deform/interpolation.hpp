#pragma once

#include <memory>
#include <span>

#include "deform/types.hpp"

namespace deform {

enum class Boundary { periodic, open };

/// Band-limited (trigonometric) interpolation of a periodic sampled signal.
///
/// The signal is upsampled exactly by spectral zero padding, then evaluated
/// between fine samples with a 6-point Lagrange stencil. For content below
/// half the original Nyquist rate the relative error is below 1e-6 at the
/// default oversampling of 16.
class BandlimitedInterpolator {
 public:
  explicit BandlimitedInterpolator(std::span<const cplx> samples, int oversample = 16);

  /// Value at real time t (samples); t is wrapped onto [0, L).
  cplx operator()(double t) const;

  std::size_t period() const { return period_; }

 private:
  std::size_t period_;
  int oversample_;
  CVector fine_;
};

/// Cubic spline through (x_i, y_i) with natural or periodic end conditions.
/// Backed by GSL. For the periodic variant the last abscissa closes the
/// period and y must repeat its first value there.
class CubicSpline {
 public:
  CubicSpline(std::span<const double> x, std::span<const double> y, Boundary boundary);
  ~CubicSpline();
  CubicSpline(CubicSpline&&) noexcept;
  CubicSpline& operator=(CubicSpline&&) noexcept;
  CubicSpline(const CubicSpline&) = delete;
  CubicSpline& operator=(const CubicSpline&) = delete;

  /// Evaluates the spline; for open boundaries x is clamped to the knot range,
  /// for periodic ones it is wrapped.
  double operator()(double x) const;
  double derivative(double x) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Cubic spline interpolation of a complex sequence sampled at t = 0..L-1,
/// evaluated at arbitrary t. Points outside [0, L-1] evaluate to zero.
class ComplexSampleSpline {
 public:
  explicit ComplexSampleSpline(std::span<const cplx> samples);
  cplx operator()(double t) const;

 private:
  std::size_t size_;
  CubicSpline re_;
  CubicSpline im_;
};

/// Cubic Hermite interpolation on [x0, x1] given values and slopes.
double hermite(double x0, double x1, double y0, double y1, double d0, double d1, double x);

/// Interpolates samples known at uniformly spaced centers c_n = offset + n*spacing
/// (n = 0..N-1) onto t = 0..length-1 with a cubic spline. For periodic boundaries
/// the samples are treated as one period of length `length`.
RVector spline_resample(std::span<const double> values, double offset, double spacing,
                        std::size_t length, Boundary boundary);

}  // namespace deform
