#pragma once

#include <Eigen/Dense>
#include <functional>

#include "deform/covariance.hpp"
#include "deform/types.hpp"

namespace deform {

/// Candidate shifts for the exhaustive likelihood search.
struct ShiftGrid {
  RVector shifts;  // ascending

  static ShiftGrid integer_range(int lo, int hi);
  void validate() const;
};

struct ShiftSearchResult {
  double delta = 0.0;
  std::size_t index = 0;
  RVector profile;  // <C(delta)^{-1} v, v> per candidate
};

using CovarianceAt = std::function<const HermitianCov&(double)>;

/// delta = argmin <C(delta)^{-1} v, v>; ties go to the smallest |delta|.
ShiftSearchResult ml_shift_search(const Eigen::VectorXcd& slice, const CovarianceAt& cov_at,
                                  const ShiftGrid& grid);

/// Coset search over a finely sampled column.
///
/// Coset i holds the entries column[base + i + k j], k < count. Its covariance
/// at coarse shift s is family(s), the reference covariance of coset 0 moved
/// by s coarse points. A match of coset i with shift s means a fine shift
/// sign * (s j - i). Each fine shift is tested once.
struct SubgridProblem {
  std::size_t stride = 1;
  std::size_t base = 0;
  std::size_t count = 1;
  int max_fine_shift = 0;  // |delta| <= max_fine_shift
  int s_min = 0;           // coarse shifts for which family(s) is defined
  int s_max = 0;
  int sign = 1;
  std::function<const HermitianCov&(int)> family;
};

struct SubgridResult {
  int delta = 0;  // fine units
  std::size_t offset = 0;
  int coarse_shift = 0;
  double value = 0.0;
};

SubgridResult subgrid_refine(const Eigen::VectorXcd& column, const SubgridProblem& problem);

}  // namespace deform
