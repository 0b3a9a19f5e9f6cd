#pragma once

#include <torch/torch.h>

#include <functional>

#include "gwin/errors.hpp"

namespace gwin {

/// Conditional Wasserstein critic D(x, y): one-hot label planes are
/// depth-wise concatenated to the input image and to every hidden feature
/// map; three stride-2 convolutions with leaky ReLU feed a dense head
/// producing one unconstrained real per example. No batch norm anywhere
/// (cross-example statistics break the gradient penalty).
struct CriticImpl : torch::nn::Module {
  explicit CriticImpl(int64_t base_channels = 64);

  /// x: (B,1,28,28) images, y: (B,) int64 labels in 0..9.
  torch::Tensor forward(const torch::Tensor& x, const torch::Tensor& y);

  int64_t base_channels;

 private:
  torch::nn::Conv2d c1{nullptr}, c2{nullptr}, c3{nullptr};
  torch::nn::Linear fc{nullptr};
};
TORCH_MODULE(Critic);

using CriticFn =
    std::function<torch::Tensor(const torch::Tensor&, const torch::Tensor&)>;

/// Mean over the batch of (||grad_xhat D(xhat, y)||_2 - 1)^2 where
/// xhat = eps*x_real + (1-eps)*x_fake, eps per example in [0,1]. The
/// gradient is taken with respect to the interpolated image only, with
/// create_graph so the critic update can differentiate through it.
torch::Tensor gradient_penalty(const CriticFn& critic,
                               const torch::Tensor& x_real,
                               const torch::Tensor& x_fake,
                               const torch::Tensor& y,
                               const torch::Tensor& eps);

}  // namespace gwin
