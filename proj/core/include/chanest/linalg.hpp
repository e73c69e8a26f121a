#pragma once

#include <Eigen/Dense>
#include <complex>

namespace chanest {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Column-wise vectorization: element k*rows+i of the result is A(i, k).
ComplexVector vec(const ComplexMatrix& a);

/// Inverse of vec. Throws std::invalid_argument if v.size() != rows*cols.
ComplexMatrix ivec(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols);

/// Kronecker product: block (i, j) of the result equals A(i, j) * B.
/// Satisfies vec(W^H * H * G) = kron(G^T, W^H) * vec(H).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Moore-Penrose pseudoinverse via SVD. Singular values <= tol * sigma_max
/// are treated as zero; tol < 0 selects max(rows, cols) * machine epsilon.
ComplexMatrix pinv(const ComplexMatrix& m, double tol = -1.0);

/// True when every entry is finite (no NaN / Inf).
bool all_finite(const ComplexMatrix& m);
bool all_finite(const RealMatrix& m);

}  // namespace chanest
