#pragma once

#include <span>

#include "deform/types.hpp"

/// Thin wrapper over FFTW with a process-wide plan cache.
///
/// Conventions are the unnormalized ones used throughout the library:
///   forward:  X[k] = sum_t x[t] exp(-2 i pi k t / L)
///   inverse:  x[t] = sum_k X[k] exp(+2 i pi k t / L)      (no 1/L)
namespace deform::fft {

void forward(std::span<cplx> data);
void inverse(std::span<cplx> data);

CVector forward_copy(std::span<const cplx> data);
/// Inverse transform including the 1/L factor, so that
/// inverse_normalized(forward_copy(x)) == x.
CVector inverse_normalized(std::span<const cplx> spectrum);

}  // namespace deform::fft
