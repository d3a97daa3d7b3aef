#include "deform/signal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "deform/fft.hpp"
#include "deform/random.hpp"

namespace deform {

double Signal::energy() const {
  double e = 0.0;
  for (const auto& v : samples) e += std::norm(v);
  return e;
}

bool Signal::is_real() const {
  return std::all_of(samples.begin(), samples.end(), [](const cplx& v) { return v.imag() == 0.0; });
}

PowerSpectrum::PowerSpectrum(RVector values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("PowerSpectrum: non-finite entry");
    if (v < 0.0) throw std::invalid_argument("PowerSpectrum: negative entry");
  }
}

double PowerSpectrum::variance() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

bool PowerSpectrum::analytic_compatible() const {
  if (values_.empty()) return true;
  if (values_[0] != 0.0) return false;
  return values_.size() % 2 != 0 || values_[values_.size() / 2] == 0.0;
}

double PowerSpectrum::density(double f) const {
  const auto L = static_cast<double>(values_.size());
  if (values_.empty()) return 0.0;
  double pos = std::fmod(f * L, L);
  if (pos < 0) pos += L;
  const auto i0 = static_cast<std::size_t>(pos);
  const std::size_t i1 = (i0 + 1) % values_.size();
  const double w = pos - static_cast<double>(i0);
  return L * ((1.0 - w) * values_[i0 % values_.size()] + w * values_[i1]);
}

// ---------------------------------------------------------------------------

namespace {

double hermite_slope(double x0, double x1, double y0, double y1, double d0, double d1, double x) {
  const double h = x1 - x0;
  const double s = (x - x0) / h;
  const double s2 = s * s;
  const double dh00 = (6 * s2 - 6 * s) / h;
  const double dh10 = 3 * s2 - 4 * s + 1;
  const double dh01 = (-6 * s2 + 6 * s) / h;
  const double dh11 = 3 * s2 - 2 * s;
  return dh00 * y0 + dh10 * d0 + dh01 * y1 + dh11 * d1;
}

struct Segment {
  double x0, x1, y0, y1, d0, d1;
};

// Hermite segment of the periodically or linearly extended deformation
// containing integer index j (covering [j, j+1]).
Segment segment_at(const DeformationFunction& g, long j, double inc) {
  const auto L = static_cast<long>(g.size());
  if (g.boundary == Boundary::periodic) {
    auto sample = [&](long idx, double& y, double& d) {
      long p = idx >= 0 ? idx / L : -((-idx + L - 1) / L);
      long r = idx - p * L;
      y = g.gamma[static_cast<std::size_t>(r)] + static_cast<double>(p) * inc;
      d = g.gamma_prime[static_cast<std::size_t>(r)];
    };
    Segment s{static_cast<double>(j), static_cast<double>(j + 1), 0, 0, 0, 0};
    sample(j, s.y0, s.d0);
    sample(j + 1, s.y1, s.d1);
    return s;
  }
  const long jj = std::clamp<long>(j, 0, L - 2);
  const auto a = static_cast<std::size_t>(jj);
  return {static_cast<double>(jj), static_cast<double>(jj + 1), g.gamma[a], g.gamma[a + 1],
          g.gamma_prime[a], g.gamma_prime[a + 1]};
}

double eval_value(const DeformationFunction& g, double t, double inc) {
  const auto L = static_cast<double>(g.size());
  if (g.boundary == Boundary::open) {
    if (t <= 0.0) return g.gamma.front() + t * g.gamma_prime.front();
    if (t >= L - 1) return g.gamma.back() + (t - (L - 1)) * g.gamma_prime.back();
  }
  const Segment s = segment_at(g, static_cast<long>(std::floor(t)), inc);
  return hermite(s.x0, s.x1, s.y0, s.y1, s.d0, s.d1, t);
}

double eval_derivative(const DeformationFunction& g, double t, double inc) {
  const auto L = static_cast<double>(g.size());
  if (g.boundary == Boundary::open) {
    if (t <= 0.0) return g.gamma_prime.front();
    if (t >= L - 1) return g.gamma_prime.back();
  }
  const Segment s = segment_at(g, static_cast<long>(std::floor(t)), inc);
  return hermite_slope(s.x0, s.x1, s.y0, s.y1, s.d0, s.d1, t);
}

}  // namespace

double DeformationFunction::value(double t) const { return eval_value(*this, t, period_increment()); }

double DeformationFunction::derivative(double t) const {
  return eval_derivative(*this, t, period_increment());
}

double DeformationFunction::period_increment() const {
  double s = 0.0;
  for (double d : gamma_prime) s += d;
  return s;
}

double DeformationFunction::max_abs_second_derivative() const {
  const std::size_t L = size();
  double best = 0.0;
  if (L < 2) return 0.0;
  if (boundary == Boundary::periodic) {
    CVector spec(gamma_prime.begin(), gamma_prime.end());
    fft::forward(spec);
    for (std::size_t k = 0; k < L; ++k) {
      const long kk = k <= L / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(L);
      if (L % 2 == 0 && k == L / 2) {
        spec[k] = 0.0;
        continue;
      }
      spec[k] *= cplx{0.0, kTwoPi * static_cast<double>(kk) / static_cast<double>(L)};
    }
    const CVector d2 = fft::inverse_normalized(spec);
    for (const auto& v : d2) best = std::max(best, std::abs(v.real()));
    return best;
  }
  for (std::size_t t = 0; t < L; ++t) {
    double d;
    if (t == 0)
      d = gamma_prime[1] - gamma_prime[0];
    else if (t + 1 == L)
      d = gamma_prime[L - 1] - gamma_prime[L - 2];
    else
      d = 0.5 * (gamma_prime[t + 1] - gamma_prime[t - 1]);
    best = std::max(best, std::abs(d));
  }
  return best;
}

void DeformationFunction::validate() const {
  if (gamma.size() != gamma_prime.size())
    throw std::invalid_argument("DeformationFunction: gamma and gamma' lengths differ");
  if (gamma.size() < 2) throw std::invalid_argument("DeformationFunction: need at least 2 samples");
  for (std::size_t t = 0; t < gamma.size(); ++t) {
    if (!std::isfinite(gamma[t]) || !std::isfinite(gamma_prime[t]))
      throw std::invalid_argument("DeformationFunction: non-finite sample");
  }
  if (kind == DeformationKind::warp) {
    for (std::size_t t = 0; t < gamma.size(); ++t) {
      if (gamma_prime[t] <= 0.0)
        throw std::invalid_argument("DeformationFunction: warp derivative must be positive");
      if (t > 0 && gamma[t] <= gamma[t - 1])
        throw std::invalid_argument("DeformationFunction: warp must be strictly increasing");
    }
  }
}

DeformationFunction sample_deformation(DeformationKind kind, std::size_t length, Boundary boundary,
                                       const std::function<double(double)>& gamma,
                                       const std::function<double(double)>& gamma_prime) {
  DeformationFunction d;
  d.kind = kind;
  d.boundary = boundary;
  d.gamma.resize(length);
  d.gamma_prime.resize(length);
  for (std::size_t t = 0; t < length; ++t) {
    d.gamma[t] = gamma(static_cast<double>(t));
    d.gamma_prime[t] = gamma_prime(static_cast<double>(t));
  }
  return d;
}

DeformationFunction deformation_from_derivative(DeformationKind kind, RVector gamma_prime,
                                                Boundary boundary, double gamma0) {
  const std::size_t L = gamma_prime.size();
  if (L < 2) throw std::invalid_argument("deformation_from_derivative: need at least 2 samples");
  DeformationFunction d;
  d.kind = kind;
  d.boundary = boundary;
  d.gamma.assign(L, gamma0);
  if (boundary == Boundary::periodic) {
    double mean = 0.0;
    for (double v : gamma_prime) mean += v;
    mean /= static_cast<double>(L);
    CVector spec(L);
    for (std::size_t t = 0; t < L; ++t) spec[t] = gamma_prime[t] - mean;
    fft::forward(spec);
    for (std::size_t k = 0; k < L; ++k) {
      const long kk = k <= L / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(L);
      if (kk == 0 || (L % 2 == 0 && k == L / 2)) {
        spec[k] = 0.0;
        continue;
      }
      spec[k] /= cplx{0.0, kTwoPi * static_cast<double>(kk) / static_cast<double>(L)};
    }
    const CVector periodic_part = fft::inverse_normalized(spec);
    const double offset = periodic_part[0].real();
    for (std::size_t t = 0; t < L; ++t)
      d.gamma[t] = gamma0 + mean * static_cast<double>(t) + periodic_part[t].real() - offset;
  } else {
    for (std::size_t t = 1; t < L; ++t)
      d.gamma[t] = d.gamma[t - 1] + 0.5 * (gamma_prime[t - 1] + gamma_prime[t]);
  }
  d.gamma_prime = std::move(gamma_prime);
  return d;
}

// ---------------------------------------------------------------------------

Signal synth_stationary(const PowerSpectrum& spectrum, std::size_t length, std::uint64_t seed) {
  if (spectrum.size() != length)
    throw std::invalid_argument("synth_stationary: spectrum length does not match signal length");
  if (length < 2) throw std::invalid_argument("synth_stationary: length must be >= 2");
  Rng rng(seed);
  CVector coeffs(length);
  for (std::size_t k = 0; k < length; ++k) {
    const cplx xi = rng.complex_normal(1.0);
    coeffs[k] = std::sqrt(spectrum[k]) * xi;
  }
  fft::inverse(coeffs);
  return Signal{std::move(coeffs), 1.0};
}

namespace {
Signal positive_band(const Signal& x, double gain) {
  const std::size_t L = x.size();
  CVector spec = fft::forward_copy(x.samples);
  for (std::size_t k = 0; k < L; ++k) {
    const bool positive = k >= 1 && 2 * k < L;
    spec[k] = positive ? gain * spec[k] : cplx{0.0, 0.0};
  }
  return Signal{fft::inverse_normalized(spec), x.fs};
}
}  // namespace

Signal analytic_signal(const Signal& x) {
  if (!x.is_real()) throw std::invalid_argument("analytic_signal: input must be real-valued");
  if (x.size() < 2) throw std::invalid_argument("analytic_signal: need at least 2 samples");
  return positive_band(x, 2.0);
}

Signal project_positive_frequencies(const Signal& x) { return positive_band(x, 1.0); }

Signal add_white_noise(Signal x, const NoiseSpec& noise, std::uint64_t seed) {
  if (noise.sigma0_sq < 0.0) throw std::invalid_argument("NoiseSpec: negative variance");
  if (noise.sigma0_sq == 0.0) return x;
  Rng rng(seed);
  for (auto& v : x.samples) v += rng.complex_normal(noise.sigma0_sq);
  return x;
}

Signal apply_modulation(const Signal& z, const DeformationFunction& gamma, const NoiseSpec& noise,
                        std::uint64_t seed) {
  if (gamma.kind != DeformationKind::modulation)
    throw std::invalid_argument("apply_modulation: deformation is not a modulation");
  if (gamma.size() != z.size()) throw std::invalid_argument("apply_modulation: length mismatch");
  const auto L = static_cast<double>(z.size());
  Signal y{CVector(z.size()), z.fs};
  for (std::size_t t = 0; t < z.size(); ++t)
    y.samples[t] = z.samples[t] * std::polar(1.0, kTwoPi * gamma.gamma[t] / L);
  return add_white_noise(std::move(y), noise, seed);
}

Signal apply_warp(const Signal& x, const DeformationFunction& gamma, const NoiseSpec& noise,
                  std::uint64_t seed) {
  if (gamma.kind != DeformationKind::warp)
    throw std::invalid_argument("apply_warp: deformation is not a warp");
  gamma.validate();
  Signal y{CVector(gamma.size()), x.fs};
  if (gamma.boundary == Boundary::periodic) {
    const BandlimitedInterpolator interp(x.samples);
    for (std::size_t t = 0; t < gamma.size(); ++t)
      y.samples[t] = std::sqrt(gamma.gamma_prime[t]) * interp(gamma.gamma[t]);
  } else {
    const double hi = static_cast<double>(x.size()) - 1.0;
    constexpr double tol = 1e-9;
    if (gamma.gamma.front() < -tol || gamma.gamma.back() > hi + tol)
      throw std::invalid_argument("apply_warp: warp leaves the source support");
    const ComplexSampleSpline interp(x.samples);
    for (std::size_t t = 0; t < gamma.size(); ++t) {
      const double s = std::clamp(gamma.gamma[t], 0.0, hi);
      y.samples[t] = std::sqrt(gamma.gamma_prime[t]) * interp(s);
    }
  }
  return add_white_noise(std::move(y), noise, seed);
}

DeformationFunction invert_deformation(const DeformationFunction& gamma) {
  if (gamma.kind != DeformationKind::warp)
    throw std::invalid_argument("invert_deformation: only warps are invertible");
  gamma.validate();
  const std::size_t L = gamma.size();
  const auto Ld = static_cast<double>(L);
  const bool periodic = gamma.boundary == Boundary::periodic;
  if (periodic && std::abs(gamma.period_increment() - Ld) > 1e-6 * Ld)
    throw std::invalid_argument("invert_deformation: periodic warp must advance by one period");

  DeformationFunction inv;
  inv.kind = DeformationKind::warp;
  inv.boundary = gamma.boundary;
  inv.gamma.resize(L);
  inv.gamma_prime.resize(L);

  // Segment index j such that gamma(j) <= s < gamma(j+1), found by bisection on
  // the extended samples, then the Hermite cubic is inverted on [j, j+1].
  const double inc = gamma.period_increment();
  auto extended = [&](long j) { return segment_at(gamma, j, inc).y0; };
  for (std::size_t i = 0; i < L; ++i) {
    const double s = static_cast<double>(i);
    double t;
    if (!periodic && s <= gamma.gamma.front()) {
      t = (s - gamma.gamma.front()) / gamma.gamma_prime.front();
    } else if (!periodic && s >= gamma.gamma.back()) {
      t = Ld - 1.0 + (s - gamma.gamma.back()) / gamma.gamma_prime.back();
    } else {
      long lo = periodic ? -static_cast<long>(L) : 0;
      long hi = periodic ? 2 * static_cast<long>(L) : static_cast<long>(L) - 1;
      while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        if (extended(mid) <= s)
          lo = mid;
        else
          hi = mid;
      }
      const Segment seg = segment_at(gamma, lo, inc);
      double a = seg.x0, b = seg.x1;
      t = a + (s - seg.y0) / (seg.y1 - seg.y0);
      for (int it = 0; it < 60; ++it) {
        const double f = hermite(seg.x0, seg.x1, seg.y0, seg.y1, seg.d0, seg.d1, t) - s;
        if (f > 0) b = t; else a = t;
        const double fp = hermite_slope(seg.x0, seg.x1, seg.y0, seg.y1, seg.d0, seg.d1, t);
        double next = fp > 0 ? t - f / fp : 0.5 * (a + b);
        if (!(next > a && next < b)) next = 0.5 * (a + b);
        if (std::abs(next - t) < 1e-13 * std::max(1.0, std::abs(t))) {
          t = next;
          break;
        }
        t = next;
      }
    }
    inv.gamma[i] = t;
    inv.gamma_prime[i] = 1.0 / eval_derivative(gamma, t, inc);
  }
  return inv;
}

DeformationFunction compose(const DeformationFunction& outer, const DeformationFunction& inner) {
  if (outer.kind != DeformationKind::warp || inner.kind != DeformationKind::warp)
    throw std::invalid_argument("compose: both deformations must be warps");
  DeformationFunction c;
  c.kind = DeformationKind::warp;
  c.boundary = inner.boundary;
  c.gamma.resize(inner.size());
  c.gamma_prime.resize(inner.size());
  const double inc = outer.period_increment();
  for (std::size_t t = 0; t < inner.size(); ++t) {
    const double u = inner.gamma[t];
    c.gamma[t] = eval_value(outer, u, inc);
    c.gamma_prime[t] = eval_derivative(outer, u, inc) * inner.gamma_prime[t];
  }
  return c;
}

}  // namespace deform
