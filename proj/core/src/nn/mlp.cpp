#include "chanest/nn/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace chanest::nn {

Mlp Mlp::make(const std::vector<int>& widths, Rng& rng) {
    if (widths.size() < 2) {
        throw std::invalid_argument("Mlp::make: need at least input and output widths");
    }
    Mlp m;
    m.layers_.reserve(widths.size() - 1);
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        const int fan_in = widths[l];
        const int fan_out = widths[l + 1];
        if (fan_in < 1 || fan_out < 1) {
            throw std::invalid_argument("Mlp::make: widths must be positive");
        }
        DenseLayer layer;
        layer.W.resize(fan_out, fan_in);
        const double a = std::sqrt(6.0 / (fan_in + fan_out));
        for (Eigen::Index j = 0; j < layer.W.cols(); ++j)
            for (Eigen::Index i = 0; i < layer.W.rows(); ++i)
                layer.W(i, j) = rng.uniform(-a, a);
        layer.b = RealVector::Zero(fan_out);
        layer.act = (l + 2 < widths.size()) ? Activation::kRelu : Activation::kLinear;
        m.layers_.push_back(std::move(layer));
    }
    return m;
}

Mlp Mlp::from_layers(std::vector<DenseLayer> layers) {
    if (layers.empty()) throw std::invalid_argument("Mlp::from_layers: no layers");
    for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
        if (layers[l + 1].W.cols() != layers[l].W.rows()) {
            throw std::invalid_argument("Mlp::from_layers: layer dimensions do not chain");
        }
    }
    for (const DenseLayer& l : layers) {
        if (l.b.size() != l.W.rows()) {
            throw std::invalid_argument("Mlp::from_layers: bias length mismatch");
        }
    }
    Mlp m;
    m.layers_ = std::move(layers);
    return m;
}

Mlp Mlp::zeros_like() const {
    Mlp z;
    z.layers_.reserve(layers_.size());
    for (const DenseLayer& l : layers_) {
        z.layers_.push_back({RealMatrix::Zero(l.W.rows(), l.W.cols()),
                             RealVector::Zero(l.b.size()), l.act});
    }
    return z;
}

std::size_t Mlp::param_count() const {
    std::size_t n = 0;
    for (const DenseLayer& l : layers_) n += static_cast<std::size_t>(l.W.size() + l.b.size());
    return n;
}

RealMatrix Mlp::forward(const RealMatrix& x, MlpTape* tape) const {
    if (layers_.empty()) throw std::invalid_argument("Mlp::forward: empty network");
    if (x.rows() != layers_.front().W.cols()) {
        throw std::invalid_argument("Mlp::forward: input dim " + std::to_string(x.rows()) +
                                    ", expected " + std::to_string(layers_.front().W.cols()));
    }
    if (tape) {
        tape->input = x;
        tape->preact.clear();
        tape->post.clear();
        tape->preact.reserve(layers_.size());
        tape->post.reserve(layers_.size());
    }
    RealMatrix a = x;
    for (const DenseLayer& l : layers_) {
        RealMatrix z = (l.W * a).colwise() + l.b;
        if (l.act == Activation::kRelu) {
            a = z.cwiseMax(0.0);
        } else {
            a = z;
        }
        if (tape) {
            tape->preact.push_back(std::move(z));
            tape->post.push_back(a);
        }
    }
    return a;
}

RealVector Mlp::forward(const RealVector& x, MlpTape* tape) const {
    return forward(RealMatrix(x), tape).col(0);
}

RealMatrix Mlp::backward(const MlpTape& tape, const RealMatrix& dy, Mlp& grads) const {
    if (tape.preact.size() != layers_.size()) {
        throw std::invalid_argument("Mlp::backward: tape does not match this network");
    }
    if (grads.layers_.size() != layers_.size()) {
        throw std::invalid_argument("Mlp::backward: gradient buffer shape mismatch");
    }
    RealMatrix delta = dy;
    for (std::size_t li = layers_.size(); li-- > 0;) {
        const DenseLayer& l = layers_[li];
        if (l.act == Activation::kRelu) {
            // subgradient at 0 is 0
            delta = delta.cwiseProduct(
                (tape.preact[li].array() > 0.0).cast<double>().matrix());
        }
        const RealMatrix& below = (li == 0) ? tape.input : tape.post[li - 1];
        grads.layers_[li].W.noalias() += delta * below.transpose();
        grads.layers_[li].b.noalias() += delta.rowwise().sum();
        if (li == 0) {
            return l.W.transpose() * delta;
        }
        delta = l.W.transpose() * delta;
    }
    return delta;  // unreachable for non-empty networks
}

void Mlp::set_all(double value) {
    for (DenseLayer& l : layers_) {
        l.W.setConstant(value);
        l.b.setConstant(value);
    }
}

std::vector<TensorView> param_views(Mlp& m) {
    std::vector<TensorView> views;
    views.reserve(2 * m.layers().size());
    for (DenseLayer& l : m.layers()) {
        views.push_back({l.W.data(), l.W.size()});
        views.push_back({l.b.data(), l.b.size()});
    }
    return views;
}

}  // namespace chanest::nn
