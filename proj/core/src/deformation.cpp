#include "deform/deformation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "deform/interpolation.hpp"

namespace deform {

double anchor_shifts(RVector& delta) {
  if (delta.empty()) return 0.0;
  const double mean = std::accumulate(delta.begin(), delta.end(), 0.0) / static_cast<double>(delta.size());
  for (auto& d : delta) d -= mean;
  return mean;
}

IntegratedDeformation integrate_deformation(std::span<const double> delta, const FrameLayout& layout,
                                            DeformationKind kind, double step_or_base) {
  if (delta.empty()) throw std::invalid_argument("integrate_deformation: no frames");
  if (layout.hop == 0 || layout.length < 2) throw std::invalid_argument("integrate_deformation: bad layout");
  for (double d : delta)
    if (!std::isfinite(d)) throw std::invalid_argument("integrate_deformation: non-finite shift");
  RVector d(delta.begin(), delta.end());
  IntegratedDeformation out;
  out.anchor.shift_mean = anchor_shifts(d);
  const auto hop = static_cast<double>(layout.hop);
  RVector dense = spline_resample(d, 0.0, hop, layout.length, layout.boundary);
  const std::size_t L = layout.length;

  if (kind == DeformationKind::modulation) {
    for (auto& v : dense) v *= step_or_base;
    out.gamma = deformation_from_derivative(kind, std::move(dense), layout.boundary, 0.0);
    return out;
  }

  if (!(step_or_base > 1.0)) throw std::invalid_argument("integrate_deformation: warp base must exceed 1");
  for (auto& v : dense) v = std::pow(step_or_base, v);
  RVector sorted = dense;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(L / 2), sorted.end());
  const double floor = 0.1 * sorted[L / 2];
  for (auto& v : dense) {
    if (v < floor) {
      v = floor;
      out.slope_floor_applied = true;
    }
  }
  double total;
  double target;
  if (layout.boundary == Boundary::periodic) {
    total = std::accumulate(dense.begin(), dense.end(), 0.0);
    target = static_cast<double>(L);
  } else {
    total = 0.0;
    for (std::size_t t = 1; t < L; ++t) total += 0.5 * (dense[t - 1] + dense[t]);
    target = static_cast<double>(L - 1);
  }
  const double scale = target / total;
  for (auto& v : dense) v *= scale;
  out.anchor.derivative_scale = scale;
  out.gamma = deformation_from_derivative(kind, std::move(dense), layout.boundary, 0.0);
  return out;
}

Signal demodulate(const Signal& y, const DeformationFunction& gamma_hat) {
  if (gamma_hat.kind != DeformationKind::modulation)
    throw std::invalid_argument("demodulate: deformation is not a modulation");
  if (gamma_hat.size() != y.size()) throw std::invalid_argument("demodulate: length mismatch");
  const auto L = static_cast<double>(y.size());
  Signal u{CVector(y.size()), y.fs};
  for (std::size_t t = 0; t < y.size(); ++t)
    u.samples[t] = y.samples[t] * std::polar(1.0, -kTwoPi * gamma_hat.gamma[t] / L);
  return u;
}

double normalized_error(std::span<const double> truth, std::span<const double> estimate,
                        DeformationKind kind) {
  if (truth.size() != estimate.size()) throw std::invalid_argument("normalized_error: length mismatch");
  if (truth.empty()) throw std::invalid_argument("normalized_error: empty input");
  const auto n = static_cast<double>(truth.size());
  if (kind == DeformationKind::warp) {
    double tt = 0.0, te = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      tt += truth[i] * truth[i];
      te += truth[i] * estimate[i];
    }
    if (!(tt > 0.0)) throw std::invalid_argument("normalized_error: zero-norm truth");
    const double c = te / tt;
    if (c == 0.0) return std::numeric_limits<double>::infinity();
    double num = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const double r = c * truth[i] - estimate[i];
      num += r * r;
    }
    return std::sqrt(num / (c * c * tt));
  }
  const double mt = std::accumulate(truth.begin(), truth.end(), 0.0) / n;
  const double me = std::accumulate(estimate.begin(), estimate.end(), 0.0) / n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double g = truth[i] - mt;
    const double r = (estimate[i] - me) - g;
    num += r * r;
    den += g * g;
  }
  if (!(den > 0.0)) throw std::invalid_argument("normalized_error: zero-norm truth");
  return std::sqrt(num / den);
}

RVector at_frames(std::span<const double> v, std::size_t hop) {
  if (hop == 0) throw std::invalid_argument("at_frames: hop must be positive");
  RVector out;
  for (std::size_t t = 0; t < v.size(); t += hop) out.push_back(v[t]);
  return out;
}

}  // namespace deform
