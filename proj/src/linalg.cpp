#include "holo/linalg.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace holo {

bool all_finite(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

bool is_anti_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m + m.adjoint()) <= tol;
}

bool is_unitary(const Matrix& m, double tol) {
  return m.rows() == m.cols() && unitarity_defect(m) <= tol;
}

double unitarity_defect(const Matrix& m) {
  return max_abs(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols()));
}

Matrix exp_anti_hermitian(const Matrix& x) {
  const Eigen::Index n = x.rows();
  if (n == 0) return x;
  // iX is hermitian; symmetrize so that rounding in the input cannot leak
  // into the eigensolver.
  const Matrix h = (cplx(0, 1) * x + (cplx(0, 1) * x).adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  const Eigen::VectorXd& w = eig.eigenvalues();
  const Matrix& q = eig.eigenvectors();
  // X = -i h, so e^X = Q diag(e^{-i w}) Q^dagger.
  Vector phase(n);
  for (Eigen::Index k = 0; k < n; ++k) phase(k) = std::polar(1.0, -w(k));
  return q * phase.asDiagonal() * q.adjoint();
}

Matrix exp_general(const Matrix& x) {
  if (x.rows() == 0) return x;
  return x.exp();
}

Matrix matrix_exp(const Matrix& x) {
  if (x.rows() != x.cols()) throw std::invalid_argument("matrix_exp needs a square matrix");
  if (!all_finite(x)) throw NonFiniteInput("matrix_exp: non-finite entry");
  if (x.isZero(0.0)) return Matrix::Identity(x.rows(), x.cols());
  const double scale = std::max(1.0, max_abs(x));
  if (is_anti_hermitian(x, 1e-14 * scale)) return exp_anti_hermitian(x);
  return exp_general(x);
}

FockOperator matrix_exp(const FockOperator& x) { return {x.space(), matrix_exp(x.matrix())}; }

ExpDerivative exp_frechet_block(const Matrix& x, const Matrix& e) {
  const Eigen::Index n = x.rows();
  if (x.cols() != n || e.rows() != n || e.cols() != n) {
    throw DimensionMismatch("exp_frechet_block: shape mismatch");
  }
  if (!all_finite(x) || !all_finite(e)) throw NonFiniteInput("exp_frechet_block: non-finite entry");
  Matrix big = Matrix::Zero(2 * n, 2 * n);
  big.topLeftCorner(n, n) = x;
  big.topRightCorner(n, n) = e;
  big.bottomRightCorner(n, n) = x;
  const Matrix eb = exp_general(big);
  return {eb.topLeftCorner(n, n), eb.topRightCorner(n, n)};
}

ExpDerivative exp_frechet_eigen(const Matrix& x, const Matrix& e) {
  const Eigen::Index n = x.rows();
  const Matrix h = (cplx(0, 1) * x + (cplx(0, 1) * x).adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  const Eigen::VectorXd& w = eig.eigenvalues();
  const Matrix& q = eig.eigenvectors();
  Vector ex(n);
  for (Eigen::Index k = 0; k < n; ++k) ex(k) = std::polar(1.0, -w(k));
  Matrix et = q.adjoint() * e * q;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      // divided difference of exp at -i w_i, -i w_j
      const double gap = w(i) - w(j);
      cplx dd;
      if (std::abs(gap) < 1e-7) {
        const cplx d(0, -gap);
        dd = ex(j) * (1.0 + d * 0.5 + d * d / 6.0);
      } else {
        dd = (ex(i) - ex(j)) / cplx(0, -gap);
      }
      et(i, j) *= dd;
    }
  }
  return {q * ex.asDiagonal() * q.adjoint(), q * et * q.adjoint()};
}

Matrix log_unitary(const Matrix& u, double unitary_tol, double branch_tol) {
  if (!is_unitary(u, unitary_tol)) throw std::invalid_argument("log_unitary: input is not unitary");
  // A unitary matrix is normal, so its complex Schur form is diagonal and the
  // Schur vectors are an orthonormal eigenbasis even under degeneracy.
  Eigen::ComplexSchur<Matrix> schur(u);
  const Matrix& q = schur.matrixU();
  const Matrix& t = schur.matrixT();
  const Eigen::Index n = u.rows();
  Vector logs(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double angle = std::arg(t(k, k));
    if (std::numbers::pi - std::abs(angle) < branch_tol) {
      throw BranchAmbiguity("log_unitary: eigenvalue at -1, principal branch undefined");
    }
    logs(k) = cplx(0, angle);
  }
  Matrix l = q * logs.asDiagonal() * q.adjoint();
  return (l - l.adjoint()) * 0.5;
}

}  // namespace holo
