#pragma once

#include <vector>

#include "chanest/linalg.hpp"
#include "chanest/nn/tensor_view.hpp"

namespace chanest::nn {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Adam with bias correction over a fixed set of parameter tensors.
class Adam {
public:
    Adam(const AdamConfig& cfg, std::size_t total_params);

    /// Applies one update in place. Parameter and gradient views must have
    /// matching sizes and a stable order across calls.
    void step(const std::vector<TensorView>& params, const std::vector<TensorView>& grads);

    long steps_taken() const { return t_; }
    const AdamConfig& config() const { return cfg_; }
    void set_learning_rate(double lr) { cfg_.learning_rate = lr; }

private:
    AdamConfig cfg_;
    RealVector m_;
    RealVector v_;
    long t_ = 0;
};

}  // namespace chanest::nn
