#pragma once

#include <cstdint>
#include <vector>

#include "chanest/channel.hpp"
#include "chanest/linalg.hpp"
#include "chanest/rng.hpp"

namespace chanest {

/// Fixed pilot configuration: unit-modulus analog combiners W (N_B x M_B),
/// precoders F (N_U x M_U), diagonal pilot symbols S, and the cached
/// product G = F * S. Immutable once built; shared across training and
/// inference.
struct PilotConfig {
    ComplexMatrix W;  // N_B x M_B
    ComplexMatrix F;  // N_U x M_U
    ComplexVector S;  // diagonal of the M_U x M_U pilot-symbol matrix
    ComplexMatrix G;  // F * diag(S)
    std::uint64_t rng_seed = 0;

    Eigen::Index n_bs() const { return W.rows(); }
    Eigen::Index n_ue() const { return F.rows(); }
    Eigen::Index m_bs() const { return W.cols(); }
    Eigen::Index m_ue() const { return F.cols(); }
    /// Total scalar observations per coherence interval.
    Eigen::Index overhead() const { return m_bs() * m_ue(); }
};

struct NoiseSpec {
    double variance = 0.0;  // per complex observation entry
    std::uint64_t rng_seed = 0;
};

/// Random-phase combiners/precoders (entries exp(j*psi), psi uniform on
/// [0, 2*pi)) and identity pilot symbols scaled by `amplitude`.
/// Deterministic per seed.
PilotConfig make_pilots(int n_bs, int n_ue, int m_bs, int m_ue, std::uint64_t seed,
                        double amplitude = 1.0);

/// One pilot observation: Y = W^H * H * G + N with N drawn i.i.d.
/// circularly-symmetric complex Gaussian from `rng`.
ComplexMatrix observe(const ComplexMatrix& h, const PilotConfig& cfg, const NoiseSpec& noise,
                      Rng& rng);

/// Convenience overload seeding a fresh generator from noise.rng_seed.
ComplexMatrix observe(const ComplexMatrix& h, const PilotConfig& cfg, const NoiseSpec& noise);

/// Real observation vector [Re(vec(Y)); Im(vec(Y))], length 2*M_B*M_U.
RealVector flatten_observation(const ComplexMatrix& y);

/// Inverse of flatten_observation (test and tooling aid).
ComplexMatrix unflatten_observation(const RealVector& v, Eigen::Index rows, Eigen::Index cols);

/// Least-squares / minimum-norm channel estimate:
/// vec(H) = pinv(G^T kron W^H) * vec(Y). Equals the normal-equation
/// solution when the operator has full column rank, and the
/// minimum-Frobenius-norm residual minimizer otherwise.
ComplexMatrix ls_estimate(const ComplexMatrix& y, const PilotConfig& cfg);

/// Caches the pseudoinverse of the observation operator so that repeated
/// estimates against fixed pilots cost one matrix-vector product each.
class LsEstimator {
public:
    explicit LsEstimator(const PilotConfig& cfg);

    ComplexMatrix estimate(const ComplexMatrix& y) const;

    const ComplexMatrix& operator_matrix() const { return m_; }

private:
    Eigen::Index n_bs_;
    Eigen::Index n_ue_;
    ComplexMatrix m_;       // G^T kron W^H
    ComplexMatrix m_pinv_;
};

/// Noise variance giving the requested per-entry SNR at the combiner
/// output, calibrated against the mean power of noiseless observations of
/// the given samples.
double calibrate_noise_variance(const std::vector<ChannelSample>& samples,
                                const PilotConfig& cfg, double snr_db);

}  // namespace chanest
