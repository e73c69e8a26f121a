#pragma once

#include <vector>

#include "chanest/linalg.hpp"
#include "chanest/nn/tensor_view.hpp"
#include "chanest/rng.hpp"

namespace chanest::nn {

enum class Activation { kRelu, kLinear };

struct DenseLayer {
    RealMatrix W;  // out x in
    RealVector b;  // out
    Activation act = Activation::kLinear;
};

/// Recorded forward-pass activations; consumed by Mlp::backward.
/// Columns index batch samples throughout.
struct MlpTape {
    RealMatrix input;
    std::vector<RealMatrix> preact;  // z_l = W_l a_{l-1} + b_l
    std::vector<RealMatrix> post;    // a_l = act(z_l)
};

/// Plain fully-connected network with exact hand-derived gradients.
class Mlp {
public:
    Mlp() = default;

    /// widths = {in, hidden..., out}; hidden layers ReLU, output linear.
    /// Glorot-uniform weights, zero biases, deterministic per rng state.
    static Mlp make(const std::vector<int>& widths, Rng& rng);

    /// Same-architecture network with all parameters zero (gradient buffer).
    Mlp zeros_like() const;

    /// Assembles a network from explicit layers (checkpoint loading).
    static Mlp from_layers(std::vector<DenseLayer> layers);

    int input_dim() const { return layers_.empty() ? 0 : static_cast<int>(layers_.front().W.cols()); }
    int output_dim() const { return layers_.empty() ? 0 : static_cast<int>(layers_.back().W.rows()); }

    std::vector<DenseLayer>& layers() { return layers_; }
    const std::vector<DenseLayer>& layers() const { return layers_; }

    std::size_t param_count() const;

    /// X is in_dim x batch; returns out_dim x batch.
    RealMatrix forward(const RealMatrix& x, MlpTape* tape = nullptr) const;
    RealVector forward(const RealVector& x, MlpTape* tape = nullptr) const;

    /// dY is the gradient of a scalar loss wrt the output (out_dim x batch,
    /// summed over the batch by the caller's scaling). Accumulates parameter
    /// gradients into `grads` and returns the gradient wrt X.
    RealMatrix backward(const MlpTape& tape, const RealMatrix& dy, Mlp& grads) const;

    void set_all(double value);

private:
    std::vector<DenseLayer> layers_;
};

/// Parameter tensors in checkpoint order: layer 0 W, layer 0 b, layer 1 W, ...
std::vector<TensorView> param_views(Mlp& m);

}  // namespace chanest::nn
