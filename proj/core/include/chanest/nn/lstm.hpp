#pragma once

#include <vector>

#include "chanest/linalg.hpp"
#include "chanest/nn/tensor_view.hpp"
#include "chanest/rng.hpp"

namespace chanest::nn {

/// One LSTM layer. Gate pre-activations are stacked as
/// [input; forget; candidate; output] blocks of `hidden` rows:
///   zbar = Wx*x + Wh*h_prev + b
///   i = sigmoid(zbar_i), f = sigmoid(zbar_f),
///   g = tanh(zbar_g),    o = sigmoid(zbar_o)
///   c = f .* c_prev + i .* g,   h = o .* tanh(c)
struct LstmLayer {
    RealMatrix Wx;  // 4H x in
    RealMatrix Wh;  // 4H x H
    RealVector b;   // 4H
};

/// Cell and hidden state per layer; columns index batch sequences.
struct LstmState {
    std::vector<RealMatrix> c;
    std::vector<RealMatrix> h;
};

struct LstmStepTape {
    std::vector<RealMatrix> x, h_prev, c_prev;
    std::vector<RealMatrix> i, f, g, o, c, tanh_c;
};

struct LstmSeqTape {
    std::vector<LstmStepTape> steps;
};

/// Stacked LSTM (standard, non-peephole) with exact BPTT gradients.
/// Layer l > 0 consumes the hidden sequence of layer l-1. State sizes
/// depend only on the input and hidden widths, never on channel dimensions.
class LstmStack {
public:
    LstmStack() = default;

    /// All weights and biases uniform on (-1/sqrt(hidden), 1/sqrt(hidden)).
    static LstmStack make(int input_size, int hidden_size, int num_layers, Rng& rng);

    /// Assembles a stack from explicit layers (checkpoint loading).
    static LstmStack from_layers(std::vector<LstmLayer> layers);

    LstmStack zeros_like() const;

    int input_size() const { return input_size_; }
    int hidden_size() const { return hidden_size_; }
    int num_layers() const { return static_cast<int>(layers_.size()); }
    std::size_t param_count() const;

    std::vector<LstmLayer>& layers() { return layers_; }
    const std::vector<LstmLayer>& layers() const { return layers_; }

    /// Zero-initialized state for a batch of `batch` sequences.
    LstmState zero_state(Eigen::Index batch) const;

    /// One time step: consumes x (input_size x batch), advances `state`,
    /// returns the top layer's new hidden (hidden_size x batch).
    RealMatrix step(const RealMatrix& x, LstmState& state, LstmStepTape* tape = nullptr) const;

    /// Full forward over a sequence from a zero state; returns the top
    /// hidden state at every step.
    std::vector<RealMatrix> forward(const std::vector<RealMatrix>& xs,
                                    LstmSeqTape* tape = nullptr) const;

    /// Backpropagation through time. d_top[t] is the loss gradient on the
    /// top hidden output of step t. Accumulates parameter gradients into
    /// `grads`; returns the gradient wrt each step's input.
    std::vector<RealMatrix> backward(const LstmSeqTape& tape,
                                     const std::vector<RealMatrix>& d_top,
                                     LstmStack& grads) const;

private:
    std::vector<LstmLayer> layers_;
    int input_size_ = 0;
    int hidden_size_ = 0;
};

/// Tensors in checkpoint order: layer 0 Wx, Wh, b, layer 1 Wx, ...
std::vector<TensorView> param_views(LstmStack& s);

}  // namespace chanest::nn
