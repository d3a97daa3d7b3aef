#include "deform/shift_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace deform {

ShiftGrid ShiftGrid::integer_range(int lo, int hi) {
  if (hi < lo) throw std::invalid_argument("ShiftGrid: empty range");
  ShiftGrid g;
  for (int d = lo; d <= hi; ++d) g.shifts.push_back(d);
  return g;
}

void ShiftGrid::validate() const {
  if (shifts.empty()) throw std::invalid_argument("ShiftGrid: no candidates");
  for (std::size_t i = 1; i < shifts.size(); ++i)
    if (!(shifts[i] > shifts[i - 1])) throw std::invalid_argument("ShiftGrid: shifts must ascend");
}

ShiftSearchResult ml_shift_search(const Eigen::VectorXcd& slice, const CovarianceAt& cov_at,
                                  const ShiftGrid& grid) {
  grid.validate();
  ShiftSearchResult r;
  r.profile.resize(grid.shifts.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.shifts.size(); ++i) {
    const double d = grid.shifts[i];
    const double v = cov_at(d).quadratic_form(slice);
    r.profile[i] = v;
    if (v < best || (v == best && std::abs(d) < std::abs(r.delta))) {
      best = v;
      r.delta = d;
      r.index = i;
    }
  }
  return r;
}

SubgridResult subgrid_refine(const Eigen::VectorXcd& column, const SubgridProblem& p) {
  if (p.stride == 0 || p.count == 0) throw std::invalid_argument("subgrid_refine: empty sub-grid");
  if (p.sign != 1 && p.sign != -1) throw std::invalid_argument("subgrid_refine: sign must be +-1");
  const std::size_t j = p.stride;
  if (p.base + (j - 1) + (p.count - 1) * j >= static_cast<std::size_t>(column.size()))
    throw std::invalid_argument("subgrid_refine: cosets exceed the column");
  const auto J = static_cast<int>(j);
  if (p.s_min > p.s_max) throw std::invalid_argument("subgrid_refine: empty coarse shift range");
  const int s_lo = std::max(p.s_min, -((p.max_fine_shift + J - 1) / J) - 1);
  const int s_hi = std::min(p.s_max, (p.max_fine_shift + J - 1) / J + 1);

  SubgridResult best;
  best.value = std::numeric_limits<double>::infinity();
  bool have = false;
  Eigen::VectorXcd w(static_cast<Eigen::Index>(p.count));
  for (std::size_t i = 0; i < j; ++i) {
    for (std::size_t k = 0; k < p.count; ++k)
      w(static_cast<Eigen::Index>(k)) = column(static_cast<Eigen::Index>(p.base + i + k * j));
    for (int s = s_lo; s <= s_hi; ++s) {
      const int delta = p.sign * (s * J - static_cast<int>(i));
      if (std::abs(delta) > p.max_fine_shift) continue;
      const double v = p.family(s).quadratic_form(w);
      const bool better =
          !have || v < best.value ||
          (v == best.value && (i < best.offset ||
                               (i == best.offset && std::abs(delta) < std::abs(best.delta))));
      if (better) {
        best = {delta, i, s, v};
        have = true;
      }
    }
  }
  if (!have) throw std::invalid_argument("subgrid_refine: no admissible shift");
  return best;
}

}  // namespace deform
