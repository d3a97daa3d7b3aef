#include <gtest/gtest.h>

#include <cmath>

#include "deform/covariance.hpp"
#include "deform/random.hpp"
#include "deform/wavelet.hpp"
#include "oracles.hpp"

using namespace deform;

namespace {

PowerSpectrum octave_band(std::size_t L, double f_lo, double f_hi) {
  RVector S(L, 0.0);
  for (std::size_t k = 1; 2 * k < L; ++k) {
    const double f = double(k) / L;
    if (f >= f_lo && f <= f_hi) S[k] = 1.0;
  }
  return PowerSpectrum(S);
}

}  // namespace

TEST(Wavelet, PeakAndSupport) {
  for (int k : {4, 7, 25, 70}) {
    const Wavelet w = design_wavelet(k);
    EXPECT_NEAR(w.psi_hat_normalized(0.25), 1.0, 1e-14);
    EXPECT_LT(w.psi_hat_normalized(0.24), 1.0);
    EXPECT_LT(w.psi_hat_normalized(0.26), 1.0);
    EXPECT_EQ(w.psi_hat_normalized(-0.1), 0.0);
    const auto [lo, hi] = w.support(1e-8);
    EXPECT_NEAR(w.psi_hat_normalized(lo), 1e-8, 1e-11);
    EXPECT_NEAR(w.psi_hat_normalized(hi), 1e-8, 1e-11);
  }
  EXPECT_THROW(design_wavelet(0), std::invalid_argument);
}

TEST(ScaleGrid, CoarseGridHoldsEveryStrideScale) {
  ScaleGrid g;
  g.q = std::pow(2.0, 1.0 / 12);
  g.m_min = -5;
  g.count = 40;
  g.stride = 6;
  const ScaleGrid c = g.coarse(2);
  EXPECT_EQ(c.count, 7);
  for (int i = 0; i < c.count; ++i) EXPECT_NEAR(c.scale(c.m_min + i), g.scale(g.m_min + 2 + 6 * i), 1e-12);
  g.stride = 0;
  EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(Cwt, MatchesLiteralSumAtSmallLength) {
  const std::size_t L = 128;
  const Wavelet w = design_wavelet(70);
  ScaleGrid grid;
  grid.q = std::pow(2.0, 1.0 / 8);
  grid.a = 8;
  grid.m_min = 0;
  grid.count = 12;
  Rng rng(6);
  const Signal x{rng.complex_white_noise(L, 1.0), 1.0};
  const auto W = cwt(x, w, grid).coeffs;
  const auto R = oracle::literal_cwt(x.samples, w, grid);
  EXPECT_LT((W - R).norm() / R.norm(), 1e-8);
}

TEST(Cwt, FlagsAndValidation) {
  const Wavelet w = design_wavelet(7);
  ScaleGrid grid;
  grid.q = 2.0;
  grid.a = 4;
  grid.m_min = -1;
  grid.count = 8;
  const auto W = cwt(Signal{CVector(64, cplx{1, 0}), 1.0}, w, grid);
  EXPECT_TRUE(W.aliased[0]);    // scale 1/2 puts the mode at Nyquist
  EXPECT_FALSE(W.aliased[3]);
  EXPECT_TRUE(W.too_coarse[7]);  // scale 64: the passband is under four bins
  EXPECT_TRUE(W.any_flagged());
  grid.a = 5;
  EXPECT_THROW(cwt(Signal{CVector(64), 1.0}, w, grid), std::invalid_argument);
  CVector bad(64);
  bad[3] = {std::nan(""), 0.0};
  grid.a = 4;
  EXPECT_THROW(cwt(Signal{bad, 1.0}, w, grid), std::invalid_argument);
}

TEST(Cwt, LocalScaleOfTone) {
  const std::size_t L = 1024;
  Signal x;
  const double f0 = 64.0 / L;
  for (std::size_t t = 0; t < L; ++t) x.samples.push_back(std::polar(1.0, kTwoPi * f0 * t));
  ScaleGrid grid;
  grid.q = std::pow(2.0, 1.0 / 24);
  grid.a = 32;
  grid.m_min = 0;
  grid.count = 96;
  const auto W = cwt(x, design_wavelet(25), grid);
  // The mode of sqrt(s) psi_hat(s f0) over s sits slightly above 0.25 / f0.
  Eigen::Index best = 0;
  W.coeffs.col(5).cwiseAbs().maxCoeff(&best);
  EXPECT_NEAR(std::log2(grid.scale(double(best)) * f0 / 0.25), 0.0, 1.0 / 24 + 0.02);
  for (double s : local_scale(W)) EXPECT_NEAR(std::log2(s * f0 / 0.25), 0.0, 0.05);
}

TEST(WaveletCovariance, BinsMatchMonteCarlo) {
  const std::size_t L = 256, R = 10000;
  const auto S = octave_band(L, 0.05, 0.2);
  const Wavelet w = design_wavelet(7);
  ScaleGrid grid;
  grid.q = std::pow(2.0, 0.25);
  grid.a = 16;
  grid.m_min = 0;
  grid.count = 10;
  const Eigen::MatrixXcd C = wavelet_cov_bins(S, w, grid);
  oracle::CovarianceAccumulator acc;
  for (std::size_t r = 0; r < R; ++r) acc.add(cwt(synth_stationary(S, L, derive_seed(8, {r})), w, grid).coeffs.col(7));
  EXPECT_LT(oracle::max_standardized_deviation(acc.mean(), C, R), 5.0);
}

TEST(WaveletCovariance, ContinuousIntegralMatchesFineBinSum) {
  const std::size_t L = 1 << 16;
  auto density = [](double f) { return f > 0 && f < 0.5 ? std::exp(-50.0 * (f - 0.12) * (f - 0.12)) : 0.0; };
  RVector S(L, 0.0);
  for (std::size_t k = 1; 2 * k < L; ++k) S[k] = density(double(k) / L) / L;
  const Wavelet w = design_wavelet(25);
  ScaleGrid grid;
  grid.q = std::pow(2.0, 1.0 / 8);
  grid.m_min = 2;
  grid.count = 16;
  const auto cont = wavelet_cov(density, w, grid, 0.0, 0.0);
  const Eigen::MatrixXcd bins = wavelet_cov_bins(PowerSpectrum(S), w, grid);
  EXPECT_LT((cont.C_X - bins).norm() / bins.norm(), 1e-4);
  EXPECT_LT(cont.C_N.norm(), 1e-300);
}

TEST(WaveletCovariance, IntegerShiftMovesTheGrid) {
  auto density = [](double f) { return 1.0 / (1.0 + 40.0 * f); };
  const Wavelet w = design_wavelet(7);
  ScaleGrid grid;
  grid.q = std::pow(2.0, 0.5);
  grid.m_min = 0;
  grid.count = 6;
  ScaleGrid moved = grid;
  moved.m_min = 3;
  const auto a = wavelet_cov(density, w, grid, 3.0, 0.5);
  const auto b = wavelet_cov(density, w, moved, 0.0, 0.5);
  EXPECT_LT((a.C_X - b.C_X).norm() / b.C_X.norm(), 1e-10);
  // The noise part does not shift and is invariant along the grid.
  EXPECT_LT((a.C_N - b.C_N).norm() / b.C_N.norm(), 1e-10);
  EXPECT_NEAR(a.C_N(0, 0).real(), a.C_N(4, 4).real(), 1e-10 * a.C_N(0, 0).real());
}

TEST(Mellin, MatchesLinearFrequencyQuadrature) {
  const Wavelet w = design_wavelet(7);
  const auto [lo, hi] = w.support(1e-16);
  for (double s : {0.0, 0.3, -1.7}) {
    // Substituting nu = x^2 removes the 1/sqrt(nu) endpoint behaviour.
    const std::size_t n = 200000;
    const double x0 = std::sqrt(lo), x1 = std::sqrt(hi);
    const double h = (x1 - x0) / (n - 1);
    cplx acc{0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      const double x = x0 + h * i;
      const double wt = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
      acc += wt * 2.0 * w.psi_hat_normalized(x * x) * std::polar(1.0, -kTwoPi * s * std::log(x * x));
    }
    acc *= h;
    EXPECT_LT(std::abs(mellin_transform(w, s) - acc), 1e-8 * std::abs(acc) + 1e-12) << s;
  }
}

TEST(Mellin, KpsiBoundsWhiteNoiseCovariance) {
  for (int k : {4, 7}) {
    const Wavelet w = design_wavelet(k);
    for (double Q : {std::pow(2.0, 0.5), 2.0}) {
      ScaleGrid grid;
      grid.q = Q;
      grid.m_min = -2;
      grid.count = 12;
      const double K = mellin_condition_Kpsi(w, Q);
      EXPECT_GT(K, 0.0);
      const auto cov = wavelet_cov([](double) { return 0.0; }, w, grid, 0.0, 1.0);
      EXPECT_GE(min_eigenvalue(cov.C_N), K - 1e-6) << k << " " << Q;
    }
  }
  EXPECT_THROW(mellin_condition_Kpsi(design_wavelet(4), 1.0), std::invalid_argument);
}

TEST(Mellin, KpsiGrowsForCoarserGridsAndStrideChoice) {
  const Wavelet w = design_wavelet(25);
  const double q = std::pow(2.0, 1.0 / 25);
  const double fine = mellin_condition_Kpsi(w, std::pow(q, 4));
  const double coarse = mellin_condition_Kpsi(w, std::pow(q, 40));
  // Finer grids have nearly collinear rows, so their bound is smaller.
  EXPECT_LT(fine, coarse);
  const std::size_t j = choose_coarse_stride(w, q, 16, 0.5);
  EXPECT_GE(j, 1u);
  EXPECT_LE(j, 16u);
  EXPECT_THROW(choose_coarse_stride(w, q, 0, 0.5), std::invalid_argument);
}

TEST(Wavelet, SpectralDecayMomentForFlatDensity) {
  const double alpha = 4.0;
  const double p = 2.0 - 6.0 / (alpha + 2.0);
  EXPECT_NEAR(spectral_decay_moment([](double) { return 1.0; }, alpha, 20001), std::pow(0.5, p + 1) / (p + 1), 1e-8);
}

TEST(Wavelet, WarpedTransformMethodsAgree) {
  const std::size_t L = 256;
  const auto S = octave_band(L, 0.06, 0.18);
  const Signal y = synth_stationary(S, L, 4);
  const double A = 0.2, om = kTwoPi / L;
  const auto g = sample_deformation(
      DeformationKind::warp, L, Boundary::periodic, [&](double t) { return t + A / om * (1 - std::cos(om * t)); },
      [&](double t) { return 1 + A * std::sin(om * t); });
  ScaleGrid grid;
  grid.q = std::pow(2.0, 0.25);
  grid.a = 16;
  grid.m_min = 0;
  grid.count = 8;
  const Wavelet w = design_wavelet(7);
  const auto a = warped_wavelet_transform(y, g, w, grid, WarpedTransformMethod::resample).coeffs;
  const auto b = warped_wavelet_transform(y, g, w, grid, WarpedTransformMethod::atoms).coeffs;
  EXPECT_LT((a - b).norm() / b.norm(), 2e-2);
}
