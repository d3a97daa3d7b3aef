#include "deform/covariance.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace deform {

namespace {
bool try_factor(const Eigen::MatrixXcd& A, Eigen::MatrixXcd& lower) {
  Eigen::LLT<Eigen::MatrixXcd> llt(A);
  if (llt.info() != Eigen::Success) return false;
  lower = llt.matrixL();
  const auto d = lower.diagonal().real();
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (!(d(i) > 0.0) || !std::isfinite(d(i))) return false;
  return true;
}
}  // namespace

HermitianCov::HermitianCov(Eigen::MatrixXcd matrix, double psd_floor_applied)
    : matrix_(std::move(matrix)), psd_floor_(psd_floor_applied) {
  if (matrix_.rows() != matrix_.cols()) throw std::invalid_argument("HermitianCov: matrix must be square");
  if (matrix_.rows() == 0) throw std::invalid_argument("HermitianCov: empty matrix");
  matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval();
  if (try_factor(matrix_, lower_)) return;
  const auto M = static_cast<double>(matrix_.rows());
  const double scale = std::max(std::abs(matrix_.trace().real()) / M, 1e-300);
  const auto I = Eigen::MatrixXcd::Identity(matrix_.rows(), matrix_.cols());
  for (double r = 1e-8; r <= 1.0; r *= 10.0) {
    ridge_ = r * scale;
    if (try_factor(matrix_ + ridge_ * I, lower_)) return;
  }
  std::ostringstream msg;
  msg << "HermitianCov: factorization failed with ridge up to " << ridge_ << " (dim " << matrix_.rows()
      << ", trace " << matrix_.trace().real() << ")";
  throw NumericalError(msg.str());
}

double HermitianCov::quadratic_form(const Eigen::VectorXcd& v) const {
  if (v.size() != matrix_.rows()) throw std::invalid_argument("quadratic_form: dimension mismatch");
  const Eigen::VectorXcd w = lower_.triangularView<Eigen::Lower>().solve(v);
  return w.squaredNorm();
}

Eigen::MatrixXcd sample_covariance_matrix(const Eigen::MatrixXcd& slices) {
  if (slices.cols() == 0 || slices.rows() == 0) throw std::invalid_argument("sample_covariance: no slices");
  Eigen::MatrixXcd C = slices * slices.adjoint() / static_cast<double>(slices.cols());
  return 0.5 * (C + C.adjoint());
}

HermitianCov sample_covariance(const Eigen::MatrixXcd& slices) {
  return HermitianCov(sample_covariance_matrix(slices));
}

double solve_quadratic_form(const HermitianCov& C, const Eigen::VectorXcd& v) { return C.quadratic_form(v); }

HermitianCov ensure_psd(const HermitianCov& C, double floor) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C.matrix());
  if (es.info() != Eigen::Success) throw NumericalError("ensure_psd: eigendecomposition failed");
  Eigen::VectorXd lambda = es.eigenvalues();
  const double top = lambda.maxCoeff();
  const double level = floor * std::max(top, 0.0);
  bool clipped = false;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < level) {
      lambda(i) = level;
      clipped = true;
    }
  }
  if (!clipped) return C;
  const Eigen::MatrixXcd V = es.eigenvectors();
  Eigen::MatrixXcd R = V * lambda.cast<cplx>().asDiagonal() * V.adjoint();
  return HermitianCov(std::move(R), level);
}

double min_eigenvalue(const Eigen::MatrixXcd& C) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("min_eigenvalue: eigendecomposition failed");
  return es.eigenvalues().minCoeff();
}

}  // namespace deform
