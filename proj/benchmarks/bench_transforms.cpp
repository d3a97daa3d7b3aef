#include <benchmark/benchmark.h>

#include <cmath>

#include "deform/covariance.hpp"
#include "deform/gabor.hpp"
#include "deform/random.hpp"
#include "deform/shift_search.hpp"
#include "deform/signal.hpp"
#include "deform/wavelet.hpp"

using namespace deform;

namespace {

Signal noise(std::size_t L) {
  Rng rng(1);
  return Signal{rng.complex_white_noise(L, 1.0), 1.0};
}

void BM_Dgt(benchmark::State& state) {
  const auto L = static_cast<std::size_t>(state.range(0));
  const Signal x = noise(L);
  const GaborFrame f = make_gabor_frame(L, 16, 1, 32.0);
  for (auto _ : state) benchmark::DoNotOptimize(dgt(x, f).coeffs.data());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Dgt)->RangeMultiplier(2)->Range(1 << 10, 1 << 12)->Unit(benchmark::kMillisecond);

void BM_Cwt(benchmark::State& state) {
  const auto L = static_cast<std::size_t>(state.range(0));
  const Signal x = noise(L);
  const Wavelet w = design_wavelet(70);
  const ScaleGrid grid;  // 280 scales at 70 voices per octave, hop 64
  for (auto _ : state) benchmark::DoNotOptimize(cwt(x, w, grid).coeffs.data());
}
BENCHMARK(BM_Cwt)->RangeMultiplier(2)->Range(1 << 12, 1 << 14)->Unit(benchmark::kMillisecond);

void BM_ApplyWarp(benchmark::State& state) {
  const auto L = static_cast<std::size_t>(state.range(0));
  const Signal x = noise(L);
  const double w = kTwoPi / static_cast<double>(L);
  const auto g = sample_deformation(
      DeformationKind::warp, L, Boundary::periodic, [&](double t) { return t + 0.3 / w * (1 - std::cos(w * t)); },
      [&](double t) { return 1 + 0.3 * std::sin(w * t); });
  for (auto _ : state) benchmark::DoNotOptimize(apply_warp(x, g, {}, 0).samples.data());
}
BENCHMARK(BM_ApplyWarp)->Arg(1 << 14)->Unit(benchmark::kMillisecond);

void BM_MlShiftSearch(benchmark::State& state) {
  const auto M = static_cast<Eigen::Index>(state.range(0));
  Rng rng(2);
  std::vector<HermitianCov> covs;
  for (int d = 0; d < 17; ++d) {
    Eigen::MatrixXcd A(M, M);
    for (Eigen::Index i = 0; i < M; ++i)
      for (Eigen::Index j = 0; j < M; ++j) A(i, j) = rng.complex_normal();
    covs.emplace_back(A * A.adjoint() + Eigen::MatrixXcd::Identity(M, M));
  }
  Eigen::VectorXcd v(M);
  for (Eigen::Index i = 0; i < M; ++i) v(i) = rng.complex_normal();
  const ShiftGrid grid = ShiftGrid::integer_range(-8, 8);
  auto cov_at = [&](double d) -> const HermitianCov& { return covs[static_cast<std::size_t>(d + 8)]; };
  for (auto _ : state) benchmark::DoNotOptimize(ml_shift_search(v, cov_at, grid).delta);
}
BENCHMARK(BM_MlShiftSearch)->Arg(16)->Arg(32)->Arg(64);

void BM_MellinKpsi(benchmark::State& state) {
  const Wavelet w = design_wavelet(static_cast<int>(state.range(0)));
  const double q = std::pow(2.0, 9.0 / 70.0);
  for (auto _ : state) benchmark::DoNotOptimize(mellin_condition_Kpsi(w, q));
}
BENCHMARK(BM_MellinKpsi)->Arg(7)->Arg(70)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
