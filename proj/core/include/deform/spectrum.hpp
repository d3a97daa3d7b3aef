#pragma once

#include "deform/signal.hpp"

namespace deform {

/// Welch estimate with a Hann window on segments of `segment` samples
/// overlapping by `overlap` (fraction in [0, 1)). The result lives on the
/// segment's DFT grid with the same per-bin convention as PowerSpectrum:
/// white noise of variance s2 gives s2 / segment in every bin.
PowerSpectrum welch_spectrum(const Signal& u, std::size_t segment, double overlap = 0.5);

/// Median density (segment * S[k]) over bins whose normalized frequency lies
/// outside [band_lo, band_hi]. Negative frequencies (k >= segment/2) take part
/// only when include_negative is set.
double noise_floor(const PowerSpectrum& spectrum, double band_lo, double band_hi,
                   bool include_negative = true);

}  // namespace deform
