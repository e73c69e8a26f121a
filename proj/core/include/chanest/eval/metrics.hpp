#pragma once

#include <vector>

#include "chanest/linalg.hpp"

namespace chanest::eval {

/// Normalized channel-estimation error in dB:
/// 10*log10(||H_hat - H||_F^2 / ||H||_F^2), clamped below at -300 dB.
/// Throws std::invalid_argument on dimension mismatch or a zero true channel.
double nmse_db(const ComplexMatrix& h_hat, const ComplexMatrix& h);

/// Spearman rank correlation (average ranks on ties).
double spearman(const RealVector& x, const RealVector& y);

double mean(const std::vector<double>& values);

}  // namespace chanest::eval
