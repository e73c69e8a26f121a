#pragma once

#include <functional>
#include <vector>

#include "chanest/nn/tensor_view.hpp"

namespace chanest::nn {

/// Finite-difference verification of analytic gradients.
///
/// `loss_fn` recomputes the scalar loss from the current parameter values;
/// `grad_fn` recomputes the loss and writes analytic gradients into the
/// `grads` views. Every parameter is perturbed by +/- h (central
/// differences). Returns
///   max over parameters of |analytic - numeric| / max(1e-8, |analytic| + |numeric|).
double grad_check(const std::function<double()>& loss_fn, const std::function<void()>& grad_fn,
                  const std::vector<TensorView>& params, const std::vector<TensorView>& grads,
                  double h = 1e-5);

}  // namespace chanest::nn
