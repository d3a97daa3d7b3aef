#include "deform/gabor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "deform/fft.hpp"

namespace deform {

namespace {

// Centred representative of u on [-L/2, L/2).
long centred(std::size_t u, std::size_t L) {
  const auto uu = static_cast<long>(u);
  const auto LL = static_cast<long>(L);
  return 2 * uu >= LL ? uu - LL : uu;
}

std::size_t wrap(long i, std::size_t L) {
  const auto LL = static_cast<long>(L);
  long r = i % LL;
  if (r < 0) r += LL;
  return static_cast<std::size_t>(r);
}

}  // namespace

void GaborFrame::validate() const {
  const std::size_t len = g.size();
  if (len < 2) throw std::invalid_argument("GaborFrame: window length must be >= 2");
  if (a == 0 || b == 0) throw std::invalid_argument("GaborFrame: a and b must be positive");
  if (len % a != 0) throw std::invalid_argument("GaborFrame: hop a must divide L");
  if (len % b != 0) throw std::invalid_argument("GaborFrame: frequency step b must divide L");
  double e = 0.0;
  for (const auto& v : g) e += std::norm(v);
  if (!(e > 0.0)) throw std::invalid_argument("GaborFrame: window has zero norm");
}

GaborFrame make_gabor_frame(std::size_t L, std::size_t a, std::size_t b, double std_dev) {
  if (std_dev <= 0.0) std_dev = static_cast<double>(a);
  GaborFrame f;
  f.a = a;
  f.b = b;
  f.g.assign(L, cplx{0.0, 0.0});
  const auto LL = static_cast<double>(L);
  const int wraps = static_cast<int>(std::ceil(8.0 * std_dev / LL)) + 1;
  double norm2 = 0.0;
  for (std::size_t t = 0; t < L; ++t) {
    double v = 0.0;
    for (int p = -wraps; p <= wraps; ++p) {
      const double u = static_cast<double>(t) + p * LL;
      v += std::exp(-0.5 * u * u / (std_dev * std_dev));
    }
    f.g[t] = v;
    norm2 += v * v;
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& v : f.g) v *= scale;
  f.validate();
  return f;
}

TimeFreqTransform dgt(const Signal& x, const GaborFrame& frame) {
  frame.validate();
  const std::size_t L = frame.L();
  if (x.size() != L) throw std::invalid_argument("dgt: signal and window lengths differ");
  const std::size_t M = frame.M();
  const std::size_t N = frame.N();
  TimeFreqTransform out{Eigen::MatrixXcd(M, N), frame};
  CVector gconj(L);
  for (std::size_t u = 0; u < L; ++u) gconj[u] = std::conj(frame.g[u]);
  CVector h(M);
  for (std::size_t n = 0; n < N; ++n) {
    std::fill(h.begin(), h.end(), cplx{0.0, 0.0});
    const std::size_t shift = n * frame.a;
    for (std::size_t u = 0; u < L; ++u) {
      std::size_t t = u + shift;
      if (t >= L) t -= L;
      h[u % M] += x.samples[t] * gconj[u];
    }
    fft::forward(h);
    for (std::size_t m = 0; m < M; ++m) out.coeffs(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = h[m];
  }
  return out;
}

cplx dgt_semicontinuous(const Signal& x, const GaborFrame& frame, double nu, std::size_t n) {
  frame.validate();
  const std::size_t L = frame.L();
  if (x.size() != L) throw std::invalid_argument("dgt_semicontinuous: length mismatch");
  if (n >= frame.N()) throw std::out_of_range("dgt_semicontinuous: frame index out of range");
  const auto LL = static_cast<double>(L);
  cplx acc{0.0, 0.0};
  const std::size_t shift = n * frame.a;
  for (std::size_t u = 0; u < L; ++u) {
    const long uc = centred(u, L);
    const std::size_t t = (u + shift) % L;
    acc += x.samples[t] * std::conj(frame.g[u]) *
           std::polar(1.0, -kTwoPi * nu * static_cast<double>(uc) / LL);
  }
  return acc;
}

RVector local_frequency(const TimeFreqTransform& G) {
  const auto M = G.coeffs.rows();
  const auto N = G.coeffs.cols();
  const auto b = static_cast<double>(G.frame.b);
  RVector nu(static_cast<std::size_t>(N), std::numeric_limits<double>::quiet_NaN());
  bool any = false;
  for (Eigen::Index n = 0; n < N; ++n) {
    double num = 0.0, den = 0.0;
    for (Eigen::Index m = 0; m < M; ++m) {
      const double e = std::norm(G.coeffs(m, n));
      num += static_cast<double>(m) * b * e;
      den += e;
    }
    if (den > 0.0) {
      nu[static_cast<std::size_t>(n)] = num / den;
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("local_frequency: transform has no energy");
  return nu;
}

void fill_missing_linear(RVector& values) {
  const std::size_t n = values.size();
  std::size_t first = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isfinite(values[i])) {
      first = i;
      break;
    }
  }
  if (first == n) throw std::invalid_argument("fill_missing_linear: no finite value");
  for (std::size_t i = 0; i < first; ++i) values[i] = values[first];
  std::size_t prev = first;
  for (std::size_t i = first + 1; i < n; ++i) {
    if (!std::isfinite(values[i])) continue;
    for (std::size_t k = prev + 1; k < i; ++k) {
      const double w = static_cast<double>(k - prev) / static_cast<double>(i - prev);
      values[k] = (1.0 - w) * values[prev] + w * values[i];
    }
    prev = i;
  }
  for (std::size_t k = prev + 1; k < n; ++k) values[k] = values[prev];
}

Eigen::MatrixXcd noise_cov(const GaborFrame& frame, double sigma0_sq) {
  frame.validate();
  const std::size_t L = frame.L();
  const std::size_t M = frame.M();
  CVector c(M, cplx{0.0, 0.0});
  for (std::size_t u = 0; u < L; ++u) c[u % M] += std::norm(frame.g[u]);
  fft::inverse(c);
  Eigen::MatrixXcd C(M, M);
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t mp = 0; mp < M; ++mp)
      C(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(mp)) = sigma0_sq * c[(mp + M - m) % M];
  return 0.5 * (C + C.adjoint());
}

CVector window_spectrum(const GaborFrame& frame, double frac) {
  const std::size_t L = frame.L();
  const auto LL = static_cast<double>(L);
  CVector v(L);
  for (std::size_t u = 0; u < L; ++u) {
    const long uc = centred(u, L);
    v[u] = frame.g[u] * std::polar(1.0, -kTwoPi * frac * static_cast<double>(uc) / LL);
  }
  fft::forward(v);
  return v;
}

namespace {

Eigen::MatrixXcd signal_cov(const PowerSpectrum& spectrum, const GaborFrame& frame, double delta) {
  frame.validate();
  const std::size_t L = frame.L();
  if (spectrum.size() != L) throw std::invalid_argument("analytic_cov: spectrum length mismatch");
  const std::size_t M = frame.M();
  const double D = delta * static_cast<double>(frame.b);
  const double whole = std::floor(D);
  const CVector ghat = window_spectrum(frame, D - whole);
  const auto offset = static_cast<long>(whole);
  std::vector<std::size_t> support;
  for (std::size_t k = 1; 2 * k < L; ++k)
    if (spectrum[k] > 0.0) support.push_back(k);
  Eigen::MatrixXcd A(static_cast<Eigen::Index>(support.size()), static_cast<Eigen::Index>(M));
  for (std::size_t r = 0; r < support.size(); ++r) {
    const std::size_t k = support[r];
    const double w = std::sqrt(spectrum[k]);
    for (std::size_t m = 0; m < M; ++m) {
      const long j = static_cast<long>(k) - static_cast<long>(m * frame.b) + offset;
      A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(m)) = w * ghat[wrap(j, L)];
    }
  }
  Eigen::MatrixXcd C = A.adjoint() * A;
  return 0.5 * (C + C.adjoint());
}

}  // namespace

Eigen::MatrixXcd analytic_cov(const PowerSpectrum& spectrum, const GaborFrame& frame) {
  return signal_cov(spectrum, frame, 0.0);
}

GaborSliceCovariance shifted_cov(const PowerSpectrum& spectrum, const GaborFrame& frame,
                                 double sigma0_sq, double delta) {
  return {signal_cov(spectrum, frame, delta), noise_cov(frame, sigma0_sq), delta};
}

double window_condition_Kg(const GaborFrame& frame) {
  frame.validate();
  const std::size_t M = frame.M();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < M; ++t) {
    double s = 0.0;
    for (std::size_t k = 0; k < frame.b; ++k) s += std::norm(frame.g[t + k * M]);
    best = std::min(best, s);
  }
  return best / static_cast<double>(frame.b);
}

RemainderBound shift_remainder_bound(const GaborFrame& frame, const DeformationFunction& gamma,
                                     double sigma_Z_sq) {
  frame.validate();
  if (gamma.kind != DeformationKind::modulation)
    throw std::invalid_argument("shift_remainder_bound: deformation must be a modulation");
  const std::size_t L = frame.L();
  const auto LL = static_cast<double>(L);
  RemainderBound r;
  r.gamma_second_sup = gamma.max_abs_second_derivative();
  if (!(r.gamma_second_sup > 0.0)) {
    r.T = std::numeric_limits<double>::infinity();
    return r;
  }
  r.hypothesis_ok = LL > 4.0 / (kPi * r.gamma_second_sup);
  r.T = std::sqrt(LL / (kPi * r.gamma_second_sup));
  for (std::size_t u = 0; u < L; ++u) {
    const auto uc = static_cast<double>(centred(u, L));
    const double mag = std::abs(frame.g[u]);
    if (std::abs(uc) <= r.T)
      r.mu2 += uc * uc * mag;
    else
      r.mu1 += mag;
  }
  const double inner = 2.0 * r.mu1 + kPi * std::exp(1.0) / LL * r.gamma_second_sup * r.mu2;
  r.bound = sigma_Z_sq * inner * inner;
  return r;
}

}  // namespace deform
