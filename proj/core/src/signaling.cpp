#include "chanest/signaling.hpp"

#include <cmath>
#include <stdexcept>

namespace chanest {

namespace {

ComplexMatrix random_phase_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    ComplexMatrix m(rows, cols);
    // column-major fill so the draw order matches storage order
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            m(i, j) = std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI));
    return m;
}

}  // namespace

PilotConfig make_pilots(int n_bs, int n_ue, int m_bs, int m_ue, std::uint64_t seed,
                        double amplitude) {
    if (n_bs < 1 || n_ue < 1 || m_bs < 1 || m_ue < 1) {
        throw std::invalid_argument("make_pilots: all dimensions must be >= 1");
    }
    Rng rng(seed);
    PilotConfig cfg;
    cfg.rng_seed = seed;
    cfg.W = random_phase_matrix(n_bs, m_bs, rng);
    cfg.F = random_phase_matrix(n_ue, m_ue, rng);
    cfg.S = ComplexVector::Constant(m_ue, std::complex<double>(amplitude, 0.0));
    cfg.G = cfg.F * cfg.S.asDiagonal();
    return cfg;
}

ComplexMatrix observe(const ComplexMatrix& h, const PilotConfig& cfg, const NoiseSpec& noise,
                      Rng& rng) {
    if (h.rows() != cfg.n_bs() || h.cols() != cfg.n_ue()) {
        throw std::invalid_argument("observe: channel is " + std::to_string(h.rows()) + "x" +
                                    std::to_string(h.cols()) + ", pilots expect " +
                                    std::to_string(cfg.n_bs()) + "x" +
                                    std::to_string(cfg.n_ue()));
    }
    ComplexMatrix y = cfg.W.adjoint() * h * cfg.G;
    if (noise.variance > 0.0) {
        for (Eigen::Index j = 0; j < y.cols(); ++j)
            for (Eigen::Index i = 0; i < y.rows(); ++i)
                y(i, j) += rng.complex_normal(noise.variance);
    }
    return y;
}

ComplexMatrix observe(const ComplexMatrix& h, const PilotConfig& cfg, const NoiseSpec& noise) {
    Rng rng(noise.rng_seed);
    return observe(h, cfg, noise, rng);
}

RealVector flatten_observation(const ComplexMatrix& y) {
    const ComplexVector v = vec(y);
    RealVector out(2 * v.size());
    out.head(v.size()) = v.real();
    out.tail(v.size()) = v.imag();
    return out;
}

ComplexMatrix unflatten_observation(const RealVector& v, Eigen::Index rows, Eigen::Index cols) {
    const Eigen::Index n = rows * cols;
    if (v.size() != 2 * n) {
        throw std::invalid_argument("unflatten_observation: length mismatch");
    }
    ComplexVector z(n);
    z.real() = v.head(n);
    z.imag() = v.tail(n);
    return ivec(z, rows, cols);
}

ComplexMatrix ls_estimate(const ComplexMatrix& y, const PilotConfig& cfg) {
    return LsEstimator(cfg).estimate(y);
}

LsEstimator::LsEstimator(const PilotConfig& cfg)
    : n_bs_(cfg.n_bs()),
      n_ue_(cfg.n_ue()),
      m_(kron(cfg.G.transpose(), cfg.W.adjoint())),
      m_pinv_(pinv(m_)) {}

ComplexMatrix LsEstimator::estimate(const ComplexMatrix& y) const {
    if (y.rows() * y.cols() != m_.rows()) {
        throw std::invalid_argument("LsEstimator: observation size mismatch");
    }
    return ivec(m_pinv_ * vec(y), n_bs_, n_ue_);
}

double calibrate_noise_variance(const std::vector<ChannelSample>& samples,
                                const PilotConfig& cfg, double snr_db) {
    if (samples.empty()) {
        throw std::invalid_argument("calibrate_noise_variance: no samples");
    }
    double power_sum = 0.0;
    long entries = 0;
    for (const ChannelSample& s : samples) {
        const ComplexMatrix y = cfg.W.adjoint() * s.H * cfg.G;
        power_sum += y.squaredNorm();
        entries += y.size();
    }
    const double mean_power = power_sum / static_cast<double>(entries);
    return mean_power / std::pow(10.0, snr_db / 10.0);
}

}  // namespace chanest
