#include "chanest/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace chanest::eval {

namespace {

constexpr double kNmseFloorDb = -300.0;

RealVector ranks(const RealVector& x) {
    const Eigen::Index n = x.size();
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&x](Eigen::Index a, Eigen::Index b) { return x(a) < x(b); });
    RealVector r(n);
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i;
        while (j + 1 < n && x(idx[static_cast<std::size_t>(j + 1)]) ==
                                x(idx[static_cast<std::size_t>(i)])) {
            ++j;
        }
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based average rank
        for (Eigen::Index k = i; k <= j; ++k) r(idx[static_cast<std::size_t>(k)]) = avg;
        i = j + 1;
    }
    return r;
}

}  // namespace

double nmse_db(const ComplexMatrix& h_hat, const ComplexMatrix& h) {
    if (h_hat.rows() != h.rows() || h_hat.cols() != h.cols()) {
        throw std::invalid_argument("nmse_db: dimension mismatch");
    }
    const double ref = h.squaredNorm();
    if (ref <= 0.0) {
        throw std::invalid_argument("nmse_db: true channel has zero norm");
    }
    const double err = (h_hat - h).squaredNorm();
    if (err <= 0.0) return kNmseFloorDb;
    return std::max(kNmseFloorDb, 10.0 * std::log10(err / ref));
}

double spearman(const RealVector& x, const RealVector& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("spearman: need two equally-sized series of length >= 2");
    }
    const RealVector rx = ranks(x);
    const RealVector ry = ranks(y);
    const double mx = rx.mean();
    const double my = ry.mean();
    const RealVector cx = rx.array() - mx;
    const RealVector cy = ry.array() - my;
    const double denom = std::sqrt(cx.squaredNorm() * cy.squaredNorm());
    if (denom <= 0.0) return 0.0;  // a constant series carries no ordering
    return cx.dot(cy) / denom;
}

double mean(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("mean: empty input");
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

}  // namespace chanest::eval
