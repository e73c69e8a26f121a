#include "chanest/nn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace chanest::nn {

Adam::Adam(const AdamConfig& cfg, std::size_t total_params)
    : cfg_(cfg),
      m_(RealVector::Zero(static_cast<Eigen::Index>(total_params))),
      v_(RealVector::Zero(static_cast<Eigen::Index>(total_params))) {}

void Adam::step(const std::vector<TensorView>& params, const std::vector<TensorView>& grads) {
    if (params.size() != grads.size()) {
        throw std::invalid_argument("Adam::step: parameter/gradient tensor count mismatch");
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));

    Eigen::Index off = 0;
    for (std::size_t k = 0; k < params.size(); ++k) {
        if (params[k].size != grads[k].size) {
            throw std::invalid_argument("Adam::step: tensor size mismatch at index " +
                                        std::to_string(k));
        }
        const Eigen::Index n = params[k].size;
        if (off + n > m_.size()) {
            throw std::invalid_argument("Adam::step: more parameters than state was sized for");
        }
        Eigen::Map<RealVector> p(params[k].data, n);
        Eigen::Map<const RealVector> g(grads[k].data, n);
        auto m = m_.segment(off, n);
        auto v = v_.segment(off, n);
        m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * g;
        v = cfg_.beta2 * v.array().matrix() + (1.0 - cfg_.beta2) * g.array().square().matrix();
        p.array() -= cfg_.learning_rate * (m.array() / bc1) /
                     ((v.array() / bc2).sqrt() + cfg_.epsilon);
        off += n;
    }
}

}  // namespace chanest::nn
