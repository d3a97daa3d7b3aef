#include <gtest/gtest.h>

#include <set>

#include "deform/fft.hpp"
#include "deform/random.hpp"
#include "oracles.hpp"

using namespace deform;

TEST(Fft, ForwardMatchesLiteralDft) {
  for (std::size_t L : {1u, 7u, 64u, 96u, 250u}) {
    Rng rng(L);
    CVector x = rng.complex_white_noise(L, 1.0);
    const CVector expect = oracle::literal_dft(x);
    const CVector got = fft::forward_copy(x);
    for (std::size_t k = 0; k < L; ++k) EXPECT_NEAR(std::abs(got[k] - expect[k]), 0.0, 1e-10 * std::sqrt(L));
  }
}

TEST(Fft, InverseNormalizedRoundTrips) {
  Rng rng(3);
  CVector x = rng.complex_white_noise(128, 2.0);
  const CVector back = fft::inverse_normalized(fft::forward_copy(x));
  for (std::size_t t = 0; t < x.size(); ++t) EXPECT_NEAR(std::abs(back[t] - x[t]), 0.0, 1e-12);
}

TEST(Fft, UnnormalizedInverseScalesByLength) {
  CVector x(16, cplx{0.0, 0.0});
  x[3] = {1.0, -2.0};
  CVector y = x;
  fft::forward(y);
  fft::inverse(y);
  for (std::size_t t = 0; t < x.size(); ++t) EXPECT_NEAR(std::abs(y[t] - 16.0 * x[t]), 0.0, 1e-12);
}

TEST(Random, DeriveSeedIsStableAndSpreads) {
  EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 20; ++a)
    for (std::uint64_t b = 0; b < 20; ++b) seen.insert(derive_seed(7, {a, b}));
  EXPECT_EQ(seen.size(), 400u);
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
}

TEST(Random, ComplexNormalIsCircular) {
  Rng rng(11);
  const int n = 200000;
  cplx pseudo{0.0, 0.0};
  double power = 0.0;
  for (int i = 0; i < n; ++i) {
    const cplx z = rng.complex_normal(2.5);
    power += std::norm(z);
    pseudo += z * z;
  }
  // Standard errors: var|z|^2 = 2.5^2 and var(z^2) = 2.5^2.
  EXPECT_NEAR(power / n, 2.5, 5 * 2.5 / std::sqrt(n));
  EXPECT_NEAR(std::abs(pseudo / double(n)), 0.0, 5 * 2.5 / std::sqrt(n));
}

TEST(Random, SameSeedSameStream) {
  Rng a(99), b(99);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.normal(), b.normal());
}
