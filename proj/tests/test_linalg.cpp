#include "chanest/linalg.hpp"

#include <gtest/gtest.h>

#include "chanest/errors.hpp"
#include "chanest/rng.hpp"

using namespace chanest;

namespace {

ComplexMatrix random_complex(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    ComplexMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = {rng.normal(), rng.normal()};
    return m;
}

double rel_err(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).norm() / std::max(1e-300, b.norm());
}

}  // namespace

TEST(Vec, ColumnMajorDefinition) {
    ComplexMatrix a(2, 2);
    a << 1.0, 3.0, 2.0, 4.0;  // [[1,3],[2,4]]
    const ComplexVector v = vec(a);
    ASSERT_EQ(v.size(), 4);
    EXPECT_EQ(v(0), std::complex<double>(1.0));
    EXPECT_EQ(v(1), std::complex<double>(2.0));
    EXPECT_EQ(v(2), std::complex<double>(3.0));
    EXPECT_EQ(v(3), std::complex<double>(4.0));
}

TEST(Vec, SingleEntry) {
    ComplexMatrix a(1, 1);
    const std::complex<double> z{0.5, -2.0};
    a(0, 0) = z;
    const ComplexVector v = vec(a);
    ASSERT_EQ(v.size(), 1);
    EXPECT_EQ(v(0), z);
}

TEST(Vec, RoundTripWithIvec) {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index rows = 1 + static_cast<Eigen::Index>(rng.below(6));
        const Eigen::Index cols = 1 + static_cast<Eigen::Index>(rng.below(6));
        const ComplexMatrix a = random_complex(rows, cols, rng);
        EXPECT_TRUE(ivec(vec(a), rows, cols) == a);
    }
}

TEST(Ivec, InverseOfVecExample) {
    ComplexVector v(4);
    v << 1.0, 2.0, 3.0, 4.0;
    const ComplexMatrix a = ivec(v, 2, 2);
    EXPECT_EQ(a(0, 0), std::complex<double>(1.0));
    EXPECT_EQ(a(1, 0), std::complex<double>(2.0));
    EXPECT_EQ(a(0, 1), std::complex<double>(3.0));
    EXPECT_EQ(a(1, 1), std::complex<double>(4.0));
}

TEST(Ivec, LengthMismatchThrows) {
    ComplexVector v(3);
    v.setZero();
    EXPECT_THROW(ivec(v, 2, 2), std::invalid_argument);
}

TEST(Ivec, VecOfIvecIsIdentity) {
    Rng rng(7);
    ComplexVector v(12);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = {rng.normal(), rng.normal()};
    EXPECT_TRUE(vec(ivec(v, 3, 4)) == v);
    EXPECT_TRUE(vec(ivec(v, 4, 3)) == v);
}

TEST(Kron, IdentityTimesIdentity) {
    const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
    EXPECT_EQ(kron(i2, i2), ComplexMatrix::Identity(4, 4));
}

TEST(Kron, ScalarCase) {
    Rng rng(3);
    const ComplexMatrix b = random_complex(3, 2, rng);
    ComplexMatrix two(1, 1);
    two(0, 0) = 2.0;
    EXPECT_LT(rel_err(kron(two, b), ComplexMatrix(2.0 * b)), 1e-15);
}

TEST(Kron, VectorizationIdentity) {
    // vec(W^H H G) = kron(G^T, W^H) vec(H), the identity the LS estimator
    // rests on, checked against direct multiplication.
    Rng rng(11);
    const ComplexMatrix w = random_complex(3, 2, rng);   // N_B x M_B
    const ComplexMatrix h = random_complex(3, 2, rng);   // N_B x N_U
    const ComplexMatrix g = random_complex(2, 3, rng);   // N_U x M_U
    const ComplexVector direct = vec(ComplexMatrix(w.adjoint() * h * g));
    const ComplexVector via_kron = kron(g.transpose(), w.adjoint()) * vec(h);
    EXPECT_LT((direct - via_kron).norm() / direct.norm(), 1e-12);
}

TEST(Kron, Bilinearity) {
    Rng rng(13);
    const ComplexMatrix a = random_complex(2, 3, rng);
    const ComplexMatrix b = random_complex(3, 2, rng);
    const std::complex<double> alpha{1.7, -0.4};
    EXPECT_LT(rel_err(kron(ComplexMatrix(alpha * a), b), ComplexMatrix(alpha * kron(a, b))),
              1e-14);
}

TEST(Pinv, Identity) {
    const ComplexMatrix i5 = ComplexMatrix::Identity(5, 5);
    EXPECT_LT(rel_err(pinv(i5), i5), 1e-14);
}

TEST(Pinv, RankDeficientDiagonal) {
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 2.0;
    const ComplexMatrix p = pinv(d);
    EXPECT_NEAR(std::abs(p(0, 0) - std::complex<double>(0.5)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(p(1, 1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(p(0, 1)), 0.0, 1e-15);
}

TEST(Pinv, PenroseConditions) {
    Rng rng(17);
    const Eigen::Index shapes[][2] = {{6, 3}, {3, 6}, {5, 5}};
    for (int trial = 0; trial < 20; ++trial) {
        const auto& s = shapes[trial % 3];
        const ComplexMatrix m = random_complex(s[0], s[1], rng);
        const ComplexMatrix p = pinv(m);
        EXPECT_LT((m * p * m - m).norm() / m.norm(), 1e-10);
        EXPECT_LT((p * m * p - p).norm() / p.norm(), 1e-10);
        const ComplexMatrix mp = m * p;
        const ComplexMatrix pm = p * m;
        EXPECT_LT((mp - mp.adjoint()).norm() / std::max(1.0, mp.norm()), 1e-10);
        EXPECT_LT((pm - pm.adjoint()).norm() / std::max(1.0, pm.norm()), 1e-10);
    }
}

TEST(Pinv, Involution) {
    Rng rng(19);
    const ComplexMatrix m = random_complex(4, 6, rng);
    EXPECT_LT(rel_err(pinv(pinv(m)), m), 1e-8);
}

TEST(Pinv, LeftInverseForFullColumnRank) {
    Rng rng(23);
    const ComplexMatrix m = random_complex(7, 3, rng);
    EXPECT_LT((pinv(m) * m - ComplexMatrix::Identity(3, 3)).norm(), 1e-8);
}

TEST(Pinv, AllFiniteOutput) {
    Rng rng(29);
    const ComplexMatrix m = random_complex(5, 4, rng);
    EXPECT_TRUE(all_finite(pinv(m)));
}
