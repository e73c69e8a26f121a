#include "chanest/linalg.hpp"

#include <Eigen/SVD>
#include <limits>
#include <stdexcept>

#include "chanest/errors.hpp"

namespace chanest {

ComplexVector vec(const ComplexMatrix& a) {
    return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

ComplexMatrix ivec(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols) {
    if (v.size() != rows * cols) {
        throw std::invalid_argument("ivec: vector length " + std::to_string(v.size()) +
                                    " does not match " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    }
    return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

ComplexMatrix pinv(const ComplexMatrix& m, double tol) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
        throw NumericalError("pinv: SVD did not converge");
    }
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return ComplexMatrix::Zero(m.cols(), m.rows());

    if (tol < 0.0) {
        tol = static_cast<double>(std::max(m.rows(), m.cols())) *
              std::numeric_limits<double>::epsilon();
    }
    const double cutoff = tol * sv(0);

    RealVector inv_sv = RealVector::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff && sv(i) > 0.0) inv_sv(i) = 1.0 / sv(i);
    }
    return svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().adjoint();
}

bool all_finite(const ComplexMatrix& m) {
    return m.allFinite();
}

bool all_finite(const RealMatrix& m) {
    return m.allFinite();
}

}  // namespace chanest
