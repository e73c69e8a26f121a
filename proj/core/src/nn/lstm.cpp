#include "chanest/nn/lstm.hpp"

#include <cmath>
#include <stdexcept>

namespace chanest::nn {

namespace {

RealMatrix sigmoid(const RealMatrix& z) {
    return ((-z.array()).exp() + 1.0).inverse().matrix();
}

}  // namespace

LstmStack LstmStack::make(int input_size, int hidden_size, int num_layers, Rng& rng) {
    if (input_size < 1 || hidden_size < 1 || num_layers < 1) {
        throw std::invalid_argument("LstmStack::make: sizes must be >= 1");
    }
    LstmStack s;
    s.input_size_ = input_size;
    s.hidden_size_ = hidden_size;
    const double a = 1.0 / std::sqrt(static_cast<double>(hidden_size));
    auto fill = [&](RealMatrix& m) {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.uniform(-a, a);
    };
    for (int l = 0; l < num_layers; ++l) {
        const int in = (l == 0) ? input_size : hidden_size;
        LstmLayer layer;
        layer.Wx.resize(4 * hidden_size, in);
        layer.Wh.resize(4 * hidden_size, hidden_size);
        layer.b.resize(4 * hidden_size);
        fill(layer.Wx);
        fill(layer.Wh);
        for (Eigen::Index i = 0; i < layer.b.size(); ++i) layer.b(i) = rng.uniform(-a, a);
        s.layers_.push_back(std::move(layer));
    }
    return s;
}

LstmStack LstmStack::from_layers(std::vector<LstmLayer> layers) {
    if (layers.empty()) throw std::invalid_argument("LstmStack::from_layers: no layers");
    const Eigen::Index hidden = layers.front().Wh.cols();
    for (const LstmLayer& l : layers) {
        if (l.Wx.rows() != 4 * hidden || l.Wh.rows() != 4 * hidden ||
            l.Wh.cols() != hidden || l.b.size() != 4 * hidden) {
            throw std::invalid_argument("LstmStack::from_layers: inconsistent gate shapes");
        }
    }
    for (std::size_t l = 1; l < layers.size(); ++l) {
        if (layers[l].Wx.cols() != hidden) {
            throw std::invalid_argument(
                "LstmStack::from_layers: stacked layer input must equal hidden size");
        }
    }
    LstmStack s;
    s.input_size_ = static_cast<int>(layers.front().Wx.cols());
    s.hidden_size_ = static_cast<int>(hidden);
    s.layers_ = std::move(layers);
    return s;
}

LstmStack LstmStack::zeros_like() const {
    LstmStack z;
    z.input_size_ = input_size_;
    z.hidden_size_ = hidden_size_;
    z.layers_.reserve(layers_.size());
    for (const LstmLayer& l : layers_) {
        z.layers_.push_back({RealMatrix::Zero(l.Wx.rows(), l.Wx.cols()),
                             RealMatrix::Zero(l.Wh.rows(), l.Wh.cols()),
                             RealVector::Zero(l.b.size())});
    }
    return z;
}

std::size_t LstmStack::param_count() const {
    std::size_t n = 0;
    for (const LstmLayer& l : layers_)
        n += static_cast<std::size_t>(l.Wx.size() + l.Wh.size() + l.b.size());
    return n;
}

LstmState LstmStack::zero_state(Eigen::Index batch) const {
    LstmState st;
    st.c.assign(layers_.size(), RealMatrix::Zero(hidden_size_, batch));
    st.h.assign(layers_.size(), RealMatrix::Zero(hidden_size_, batch));
    return st;
}

RealMatrix LstmStack::step(const RealMatrix& x, LstmState& state, LstmStepTape* tape) const {
    if (x.rows() != input_size_) {
        throw std::invalid_argument("LstmStack::step: input dim " + std::to_string(x.rows()) +
                                    ", expected " + std::to_string(input_size_));
    }
    if (state.c.size() != layers_.size()) {
        throw std::invalid_argument("LstmStack::step: state does not match layer count");
    }
    const int H = hidden_size_;
    if (tape) {
        const std::size_t L = layers_.size();
        tape->x.resize(L); tape->h_prev.resize(L); tape->c_prev.resize(L);
        tape->i.resize(L); tape->f.resize(L); tape->g.resize(L);
        tape->o.resize(L); tape->c.resize(L); tape->tanh_c.resize(L);
    }
    RealMatrix layer_in = x;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const LstmLayer& p = layers_[l];
        RealMatrix zbar = ((p.Wx * layer_in + p.Wh * state.h[l]).colwise() + p.b);
        RealMatrix i = sigmoid(zbar.topRows(H));
        RealMatrix f = sigmoid(zbar.middleRows(H, H));
        RealMatrix g = zbar.middleRows(2 * H, H).array().tanh().matrix();
        RealMatrix o = sigmoid(zbar.bottomRows(H));
        RealMatrix c = f.cwiseProduct(state.c[l]) + i.cwiseProduct(g);
        RealMatrix tc = c.array().tanh().matrix();
        RealMatrix h = o.cwiseProduct(tc);
        if (tape) {
            tape->x[l] = layer_in;
            tape->h_prev[l] = state.h[l];
            tape->c_prev[l] = state.c[l];
            tape->i[l] = i; tape->f[l] = f; tape->g[l] = g; tape->o[l] = o;
            tape->c[l] = c; tape->tanh_c[l] = tc;
        }
        state.c[l] = std::move(c);
        state.h[l] = h;
        layer_in = std::move(h);
    }
    return layer_in;
}

std::vector<RealMatrix> LstmStack::forward(const std::vector<RealMatrix>& xs,
                                           LstmSeqTape* tape) const {
    if (xs.empty()) throw std::invalid_argument("LstmStack::forward: empty sequence");
    LstmState state = zero_state(xs.front().cols());
    std::vector<RealMatrix> top;
    top.reserve(xs.size());
    if (tape) tape->steps.resize(xs.size());
    for (std::size_t t = 0; t < xs.size(); ++t) {
        top.push_back(step(xs[t], state, tape ? &tape->steps[t] : nullptr));
    }
    return top;
}

std::vector<RealMatrix> LstmStack::backward(const LstmSeqTape& tape,
                                            const std::vector<RealMatrix>& d_top,
                                            LstmStack& grads) const {
    const std::size_t T = tape.steps.size();
    const std::size_t L = layers_.size();
    if (d_top.size() != T) {
        throw std::invalid_argument("LstmStack::backward: gradient/tape length mismatch");
    }
    if (grads.layers_.size() != L) {
        throw std::invalid_argument("LstmStack::backward: gradient buffer shape mismatch");
    }
    const int H = hidden_size_;
    const Eigen::Index B = d_top.front().cols();

    std::vector<RealMatrix> dh_next(L, RealMatrix::Zero(H, B));
    std::vector<RealMatrix> dc_next(L, RealMatrix::Zero(H, B));
    std::vector<RealMatrix> dx(T);

    for (std::size_t t = T; t-- > 0;) {
        const LstmStepTape& st = tape.steps[t];
        // gradient flowing into the layer's hidden output from above
        RealMatrix from_above = d_top[t];
        for (std::size_t l = L; l-- > 0;) {
            const LstmLayer& p = layers_[l];
            const RealMatrix dh = from_above + dh_next[l];

            const RealMatrix& i = st.i[l];
            const RealMatrix& f = st.f[l];
            const RealMatrix& g = st.g[l];
            const RealMatrix& o = st.o[l];
            const RealMatrix& tc = st.tanh_c[l];

            const RealMatrix d_o = dh.cwiseProduct(tc);
            RealMatrix dc = dh.cwiseProduct(o).cwiseProduct(
                                (1.0 - tc.array().square()).matrix()) +
                            dc_next[l];
            const RealMatrix d_i = dc.cwiseProduct(g);
            const RealMatrix d_g = dc.cwiseProduct(i);
            const RealMatrix d_f = dc.cwiseProduct(st.c_prev[l]);
            dc_next[l] = dc.cwiseProduct(f);

            RealMatrix dzbar(4 * H, B);
            dzbar.topRows(H) = d_i.cwiseProduct(i).cwiseProduct((1.0 - i.array()).matrix());
            dzbar.middleRows(H, H) =
                d_f.cwiseProduct(f).cwiseProduct((1.0 - f.array()).matrix());
            dzbar.middleRows(2 * H, H) =
                d_g.cwiseProduct((1.0 - g.array().square()).matrix());
            dzbar.bottomRows(H) = d_o.cwiseProduct(o).cwiseProduct((1.0 - o.array()).matrix());

            grads.layers_[l].Wx.noalias() += dzbar * st.x[l].transpose();
            grads.layers_[l].Wh.noalias() += dzbar * st.h_prev[l].transpose();
            grads.layers_[l].b.noalias() += dzbar.rowwise().sum();

            dh_next[l] = p.Wh.transpose() * dzbar;
            from_above = p.Wx.transpose() * dzbar;  // becomes dh for layer l-1
        }
        dx[t] = std::move(from_above);
    }
    return dx;
}

std::vector<TensorView> param_views(LstmStack& s) {
    std::vector<TensorView> views;
    views.reserve(3 * s.layers().size());
    for (LstmLayer& l : s.layers()) {
        views.push_back({l.Wx.data(), l.Wx.size()});
        views.push_back({l.Wh.data(), l.Wh.size()});
        views.push_back({l.b.data(), l.b.size()});
    }
    return views;
}

}  // namespace chanest::nn
