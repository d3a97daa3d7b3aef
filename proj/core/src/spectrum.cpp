#include "deform/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "deform/fft.hpp"

namespace deform {

PowerSpectrum welch_spectrum(const Signal& u, std::size_t segment, double overlap) {
  const std::size_t L = u.size();
  if (segment < 2 || segment > L) throw std::invalid_argument("welch_spectrum: segment must lie in [2, L]");
  if (!(overlap >= 0.0 && overlap < 1.0)) throw std::invalid_argument("welch_spectrum: overlap must lie in [0, 1)");
  const auto step = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(segment * (1.0 - overlap))));
  RVector window(segment);
  double wsq = 0.0;
  for (std::size_t t = 0; t < segment; ++t) {
    window[t] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(t) / static_cast<double>(segment));
    wsq += window[t] * window[t];
  }
  RVector acc(segment, 0.0);
  std::size_t count = 0;
  CVector buf(segment);
  for (std::size_t start = 0; start + segment <= L; start += step) {
    for (std::size_t t = 0; t < segment; ++t) buf[t] = u.samples[start + t] * window[t];
    fft::forward(buf);
    for (std::size_t k = 0; k < segment; ++k) acc[k] += std::norm(buf[k]);
    ++count;
  }
  const double scale = 1.0 / (static_cast<double>(count) * wsq * static_cast<double>(segment));
  for (auto& v : acc) v *= scale;
  return PowerSpectrum(std::move(acc));
}

double noise_floor(const PowerSpectrum& spectrum, double band_lo, double band_hi, bool include_negative) {
  const std::size_t n = spectrum.size();
  RVector vals;
  for (std::size_t k = 0; k < n; ++k) {
    const bool negative = 2 * k >= n;
    if (negative && !include_negative) continue;
    const double f = negative ? static_cast<double>(k) / static_cast<double>(n) - 1.0
                              : static_cast<double>(k) / static_cast<double>(n);
    if (f >= band_lo && f <= band_hi) continue;
    vals.push_back(spectrum[k] * static_cast<double>(n));
  }
  if (vals.empty()) throw std::invalid_argument("noise_floor: no bins outside the signal band");
  const auto mid = vals.begin() + static_cast<long>(vals.size() / 2);
  std::nth_element(vals.begin(), mid, vals.end());
  return *mid;
}

}  // namespace deform
