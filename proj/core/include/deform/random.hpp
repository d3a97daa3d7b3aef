#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "deform/types.hpp"

namespace deform {

/// splitmix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Derives a child seed from a master seed and a path of integer labels
/// (scenario, cell, realization, ...). Stable across platforms.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// Seeded generator for real and circular complex Gaussian variates.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

  double normal() { return normal_(engine_); }

  /// Circular complex Gaussian with E|z|^2 = variance and E[z^2] = 0.
  cplx complex_normal(double variance = 1.0);

  CVector complex_white_noise(std::size_t n, double variance);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace deform
