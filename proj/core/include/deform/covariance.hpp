#pragma once

#include <Eigen/Dense>
#include <optional>

#include "deform/types.hpp"

namespace deform {

/// Hermitian covariance with a Cholesky factorization computed at
/// construction. If the plain factorization fails a ridge
/// 1e-8 * trace / M is added and grown tenfold until it succeeds.
class HermitianCov {
 public:
  HermitianCov() = default;
  explicit HermitianCov(Eigen::MatrixXcd matrix, double psd_floor_applied = 0.0);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  /// Ridge eps_r added before factorization (0 when none was needed).
  double ridge() const { return ridge_; }
  /// Eigenvalue floor applied by ensure_psd, 0 otherwise.
  double psd_floor() const { return psd_floor_; }

  /// <(C + eps_r I)^{-1} v, v>.
  double quadratic_form(const Eigen::VectorXcd& v) const;

 private:
  Eigen::MatrixXcd matrix_;
  Eigen::MatrixXcd lower_;
  double ridge_ = 0.0;
  double psd_floor_ = 0.0;
};

/// (1/N) sum_n v_n v_n^* over the columns of `slices`.
HermitianCov sample_covariance(const Eigen::MatrixXcd& slices);

/// Raw sample covariance matrix (no factorization).
Eigen::MatrixXcd sample_covariance_matrix(const Eigen::MatrixXcd& slices);

double solve_quadratic_form(const HermitianCov& C, const Eigen::VectorXcd& v);

/// Clips eigenvalues below floor * lambda_max up to that value.
HermitianCov ensure_psd(const HermitianCov& C, double floor);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const Eigen::MatrixXcd& C);

}  // namespace deform
