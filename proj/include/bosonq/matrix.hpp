#pragma once

#include <complex>
#include <Eigen/Dense>

namespace bosonq {

using complexd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr complexd I_UNIT{0.0, 1.0};

/// Kronecker product with the first argument as the leftmost tensor factor.
Matrix kron(const Matrix& a, const Matrix& b);

/// exp(i * theta * h) for hermitian h, via spectral decomposition.
Matrix expi_hermitian(const Matrix& h, double theta);

/// Largest singular value of m (spectral norm).
double op_norm(const Matrix& m);

/// max_ij |a_ij - b_ij|
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Frobenius-normalized check helpers for unit tests and acceptance checks.
bool approx_equal(const Matrix& a, const Matrix& b, double tol);

/// True when a == e^{i phi} b for some phase phi, to tolerance tol.
bool equal_up_to_phase(const Matrix& a, const Matrix& b, double tol);

}  // namespace bosonq
