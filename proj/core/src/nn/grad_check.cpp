#include "chanest/nn/grad_check.hpp"

#include <cmath>
#include <stdexcept>

namespace chanest::nn {

double grad_check(const std::function<double()>& loss_fn, const std::function<void()>& grad_fn,
                  const std::vector<TensorView>& params, const std::vector<TensorView>& grads,
                  double h) {
    if (params.size() != grads.size()) {
        throw std::invalid_argument("grad_check: parameter/gradient view count mismatch");
    }
    grad_fn();
    // snapshot the analytic gradients before perturbing anything
    std::vector<std::vector<double>> analytic(params.size());
    for (std::size_t k = 0; k < grads.size(); ++k) {
        analytic[k].assign(grads[k].data, grads[k].data + grads[k].size);
    }

    double worst = 0.0;
    for (std::size_t k = 0; k < params.size(); ++k) {
        for (Eigen::Index idx = 0; idx < params[k].size; ++idx) {
            double& p = params[k].data[idx];
            const double saved = p;
            p = saved + h;
            const double up = loss_fn();
            p = saved - h;
            const double down = loss_fn();
            p = saved;
            const double numeric = (up - down) / (2.0 * h);
            const double a = analytic[k][static_cast<std::size_t>(idx)];
            const double err =
                std::abs(a - numeric) / std::max(1e-8, std::abs(a) + std::abs(numeric));
            if (err > worst) worst = err;
        }
    }
    return worst;
}

}  // namespace chanest::nn
