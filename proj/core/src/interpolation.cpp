#include "deform/interpolation.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "deform/fft.hpp"

namespace deform {

BandlimitedInterpolator::BandlimitedInterpolator(std::span<const cplx> samples, int oversample)
    : period_(samples.size()), oversample_(oversample) {
  if (period_ < 2) throw std::invalid_argument("BandlimitedInterpolator: need at least 2 samples");
  if (oversample < 1) throw std::invalid_argument("BandlimitedInterpolator: oversample must be >= 1");
  const std::size_t L = period_;
  const std::size_t F = L * static_cast<std::size_t>(oversample);
  CVector spec = fft::forward_copy(samples);
  CVector padded(F, cplx{0.0, 0.0});
  const std::size_t half = L / 2;
  for (std::size_t k = 0; k < L; ++k) {
    if (L % 2 == 0 && k == half) {
      padded[half] += 0.5 * spec[k];
      padded[F - half] += 0.5 * spec[k];
    } else if (k < (L + 1) / 2) {
      padded[k] = spec[k];
    } else {
      padded[F - (L - k)] = spec[k];
    }
  }
  fft::inverse(padded);
  const double scale = 1.0 / static_cast<double>(L);
  for (auto& v : padded) v *= scale;
  fine_ = std::move(padded);
}

cplx BandlimitedInterpolator::operator()(double t) const {
  const double L = static_cast<double>(period_);
  double u = std::fmod(t, L);
  if (u < 0) u += L;
  const double pos = u * oversample_;
  const auto F = static_cast<long>(fine_.size());
  const long i0 = static_cast<long>(std::floor(pos));
  const double f = pos - static_cast<double>(i0);
  // 6-point Lagrange stencil on nodes -2..3 relative to i0.
  constexpr std::array<int, 6> nodes{-2, -1, 0, 1, 2, 3};
  cplx acc{0.0, 0.0};
  for (int a = 0; a < 6; ++a) {
    double w = 1.0;
    for (int b = 0; b < 6; ++b) {
      if (a == b) continue;
      w *= (f - nodes[b]) / static_cast<double>(nodes[a] - nodes[b]);
    }
    long idx = (i0 + nodes[a]) % F;
    if (idx < 0) idx += F;
    acc += w * fine_[static_cast<std::size_t>(idx)];
  }
  return acc;
}

struct CubicSpline::Impl {
  gsl_interp_accel* acc = nullptr;
  gsl_spline* spline = nullptr;
  double lo = 0.0;
  double hi = 0.0;
  bool periodic = false;
  ~Impl() {
    if (spline) gsl_spline_free(spline);
    if (acc) gsl_interp_accel_free(acc);
  }
};

CubicSpline::CubicSpline(std::span<const double> x, std::span<const double> y, Boundary boundary)
    : impl_(std::make_unique<Impl>()) {
  if (x.size() != y.size()) throw std::invalid_argument("CubicSpline: size mismatch");
  const std::size_t min_points = boundary == Boundary::periodic ? 2 : 3;
  if (x.size() < min_points) throw std::invalid_argument("CubicSpline: too few points");
  static const bool handler_off = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)handler_off;
  const gsl_interp_type* type = boundary == Boundary::periodic ? gsl_interp_cspline_periodic
                                                               : gsl_interp_cspline;
  impl_->periodic = boundary == Boundary::periodic;
  impl_->acc = gsl_interp_accel_alloc();
  impl_->spline = gsl_spline_alloc(type, x.size());
  if (gsl_spline_init(impl_->spline, x.data(), y.data(), x.size()) != GSL_SUCCESS)
    throw std::invalid_argument("CubicSpline: abscissae must be strictly increasing");
  impl_->lo = x.front();
  impl_->hi = x.back();
}

CubicSpline::~CubicSpline() = default;
CubicSpline::CubicSpline(CubicSpline&&) noexcept = default;
CubicSpline& CubicSpline::operator=(CubicSpline&&) noexcept = default;

namespace {
double fold(double x, double lo, double hi, bool periodic) {
  if (periodic) {
    const double span = hi - lo;
    double u = std::fmod(x - lo, span);
    if (u < 0) u += span;
    return lo + u;
  }
  return std::clamp(x, lo, hi);
}
}  // namespace

double CubicSpline::operator()(double x) const {
  const double u = fold(x, impl_->lo, impl_->hi, impl_->periodic);
  return gsl_spline_eval(impl_->spline, u, impl_->acc);
}

double CubicSpline::derivative(double x) const {
  const double u = fold(x, impl_->lo, impl_->hi, impl_->periodic);
  return gsl_spline_eval_deriv(impl_->spline, u, impl_->acc);
}

namespace {
RVector index_axis(std::size_t n) {
  RVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i);
  return x;
}
RVector real_parts(std::span<const cplx> v) {
  RVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].real();
  return r;
}
RVector imag_parts(std::span<const cplx> v) {
  RVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].imag();
  return r;
}
}  // namespace

ComplexSampleSpline::ComplexSampleSpline(std::span<const cplx> samples)
    : size_(samples.size()),
      re_(index_axis(samples.size()), real_parts(samples), Boundary::open),
      im_(index_axis(samples.size()), imag_parts(samples), Boundary::open) {}

cplx ComplexSampleSpline::operator()(double t) const {
  if (t < 0.0 || t > static_cast<double>(size_ - 1)) return {0.0, 0.0};
  return {re_(t), im_(t)};
}

double hermite(double x0, double x1, double y0, double y1, double d0, double d1, double x) {
  const double h = x1 - x0;
  const double s = (x - x0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
}

RVector spline_resample(std::span<const double> values, double offset, double spacing,
                        std::size_t length, Boundary boundary) {
  const std::size_t n = values.size();
  if (n == 0) throw std::invalid_argument("spline_resample: no samples");
  RVector out(length);
  if (n == 1) {
    std::fill(out.begin(), out.end(), values[0]);
    return out;
  }
  if (boundary == Boundary::periodic) {
    RVector x(n + 1), y(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = offset + spacing * static_cast<double>(i);
      y[i] = values[i];
    }
    x[n] = offset + spacing * static_cast<double>(n);
    y[n] = values[0];
    CubicSpline spline(x, y, Boundary::periodic);
    for (std::size_t t = 0; t < length; ++t) out[t] = spline(static_cast<double>(t));
    return out;
  }
  if (n == 2) {
    for (std::size_t t = 0; t < length; ++t) {
      const double u = (static_cast<double>(t) - offset) / spacing;
      out[t] = values[0] + (values[1] - values[0]) * std::clamp(u, 0.0, 1.0);
    }
    return out;
  }
  RVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = offset + spacing * static_cast<double>(i);
  CubicSpline spline(x, values, Boundary::open);
  // Clamped spline evaluation holds the edge value outside the knot range.
  for (std::size_t t = 0; t < length; ++t) out[t] = spline(static_cast<double>(t));
  return out;
}

}  // namespace deform
