#include "deform/random.hpp"

#include <cmath>

namespace deform {

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix_seed(master);
  for (auto label : path) s = mix_seed(s ^ mix_seed(label + 0x632be59bd9b4e019ULL));
  return s;
}

cplx Rng::complex_normal(double variance) {
  const double sd = std::sqrt(0.5 * variance);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {sd * re, sd * im};
}

CVector Rng::complex_white_noise(std::size_t n, double variance) {
  CVector out(n);
  for (auto& v : out) v = complex_normal(variance);
  return out;
}

}  // namespace deform
