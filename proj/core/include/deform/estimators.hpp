#pragma once

#include <Eigen/Dense>
#include <vector>

#include "deform/deformation.hpp"
#include "deform/gabor.hpp"
#include "deform/signal.hpp"
#include "deform/wavelet.hpp"

namespace deform {

enum class NoiseMode { estimate, known };

struct WarpSettings {
  int wavelet_k = 70;
  ScaleGrid grid{};            // stride 0 is resolved by choose_coarse_stride
  std::size_t window_lo = 0;   // observed scale rows [window_lo, window_lo + window_count)
  std::size_t window_count = 280;
  int max_fine_shift = 70;     // one octave at 70 voices per octave
  // The reference transform extends the grid by max_fine_shift + stride rows
  // on each side so that every candidate shift has a covariance block.
  std::size_t max_stride = 64;
};

struct ModulationSettings {
  std::size_t hop = 16;
  std::size_t freq_step = 1;    // fine frequency step b (bins)
  double window_std = 0.0;      // <= 0: equal to hop
  std::size_t band_lo = 0;      // observed frequency rows [band_lo, band_lo + band_count)
  std::size_t band_count = 0;   // 0: rows L/8 .. 3L/8 of the fine grid
  int max_fine_shift = 0;       // 0: M / 4
  std::size_t max_stride = 64;
};

struct EstimatorConfig {
  double epsilon = 0.02;
  std::size_t max_iters = 20;
  NoiseMode noise_mode = NoiseMode::estimate;
  double sigma0_sq = 0.0;  // used when noise_mode == known
  Boundary boundary = Boundary::periodic;
  std::size_t stride = 0;  // coarse sub-grid stride; 0 selects it from K_g / K_psi
  double stride_rel = 1e-3;
  std::size_t threads = 1;
  WarpSettings warp{};
  ModulationSettings modulation{};

  void validate() const;
};

struct IterationRecord {
  RVector delta;          // anchored per-frame shifts after this iteration
  double criterion = 0.0; // ||delta_k - delta_{k+1}|| / ||delta_{k+1}||
  double mean_quadratic_form = 0.0;
};

struct DeformationEstimate {
  DeformationKind kind = DeformationKind::warp;
  RVector delta;                // anchored per-frame shifts (fine grid units)
  RVector initial_delta;        // anchored baseline initializer
  DeformationFunction gamma_hat;
  AnchorRecord anchor;
  std::vector<IterationRecord> iterations;
  std::size_t stride = 1;
  std::size_t hop = 1;
  double sigma0_sq = 0.0;
  bool converged = false;
  bool slope_floor_applied = false;
  std::size_t best_iteration = 0;

  /// gamma' at frame centres, and the baseline's gamma' implied by initial_delta.
  RVector gamma_prime_at_frames() const;
  RVector baseline_gamma_prime_at_frames() const;

  double fine_unit = 1.0;  // q (warp) or frequency step in bins (modulation)
};

/// Subgrid stride for a Gabor slice: smallest j whose coarse frame (step j b)
/// has K_g at least rel times the best over j <= max_stride.
std::size_t choose_gabor_stride(const GaborFrame& fine_frame, std::size_t max_stride, double rel);

DeformationEstimate estimate_modulation(const Signal& y, const EstimatorConfig& config);
DeformationEstimate estimate_warping(const Signal& y, const EstimatorConfig& config);

}  // namespace deform
