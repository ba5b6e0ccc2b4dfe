#include "bosonq/matrix.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace bosonq {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix expi_hermitian(const Matrix& h, double theta) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const auto& v = es.eigenvectors();
  Vector phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k)
    phases(k) = std::exp(I_UNIT * theta * es.eigenvalues()(k));
  return v * phases.asDiagonal() * v.adjoint();
}

double op_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs_diff(a, b) <= tol;
}

bool equal_up_to_phase(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  // Align phases on the largest entry of b.
  Eigen::Index bi = 0, bj = 0;
  b.cwiseAbs().maxCoeff(&bi, &bj);
  if (std::abs(b(bi, bj)) < tol) return approx_equal(a, b, tol);
  if (std::abs(a(bi, bj)) < 1e-300) return false;
  complexd phase = a(bi, bj) / b(bi, bj);
  phase /= std::abs(phase);
  return max_abs_diff(a, phase * b) <= tol;
}

}  // namespace bosonq
