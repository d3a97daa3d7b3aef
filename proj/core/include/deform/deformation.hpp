#pragma once

#include <span>

#include "deform/signal.hpp"
#include "deform/types.hpp"

namespace deform {

/// Mean removed from the per-frame shifts, and the factor applied to gamma'
/// to fix its overall level.
struct AnchorRecord {
  double shift_mean = 0.0;
  double derivative_scale = 1.0;
};

/// Subtracts the mean of delta in place; returns the removed mean.
double anchor_shifts(RVector& delta);

struct FrameLayout {
  std::size_t hop = 1;      // frame n sits at t = n * hop
  std::size_t length = 0;   // signal length L
  Boundary boundary = Boundary::periodic;
};

struct IntegratedDeformation {
  DeformationFunction gamma;
  AnchorRecord anchor;
  bool slope_floor_applied = false;
};

/// Modulation: gamma'(n a) = delta[n] * step (bins) after zero-mean anchoring.
/// Warp: gamma'(n a) = base^delta[n] after zero-mean anchoring, normalized so that
/// a periodic warp advances by L per period and an open one keeps its end points.
/// Per-frame values are spline-interpolated to the signal grid and integrated
/// with gamma(0) = 0. Warp slopes are floored at 0.1 * median(gamma').
IntegratedDeformation integrate_deformation(std::span<const double> delta, const FrameLayout& layout,
                                            DeformationKind kind, double step_or_base);

/// U[t] = Y[t] exp(-2 i pi gamma(t) / L).
Signal demodulate(const Signal& y, const DeformationFunction& gamma_hat);

/// Relative error of an estimated gamma' after alignment within the affine
/// class: warps are compared up to a positive factor
/// (||c g - e|| / ||c g||, c = <g, e> / ||g||^2), modulations up to an
/// additive constant (relative to the norm of the centred truth).
double normalized_error(std::span<const double> truth, std::span<const double> estimate,
                        DeformationKind kind);

/// Samples of v at frame centres t = n * hop.
RVector at_frames(std::span<const double> v, std::size_t hop);

}  // namespace deform
