#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace deform {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;
using RVector = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Raised when a numerical procedure cannot produce a result (factorization
/// failure after regularization, non-finite quadrature, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace deform
