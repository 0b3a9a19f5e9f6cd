#pragma once

#include <torch/torch.h>

#include <optional>

namespace gwin {

/// CPU RNG stream owned by a single sampling call sequence.
at::Generator make_rng(uint64_t seed);

/// Random +-1 tensor, one draw per element.
torch::Tensor rand_sign(torch::IntArrayRef sizes,
                        std::optional<at::Generator> gen,
                        torch::TensorOptions opts = torch::kFloat32);

/// Mean-field Gaussian variational layer state shared by the dense and
/// conv Flipout layers. Posterior scale = softplus(rho); prior N(0,1).
struct VariationalParams {
  torch::Tensor weight_mu, weight_rho;
  torch::Tensor bias_mu, bias_rho;

  torch::Tensor weight_sigma() const {
    return torch::nn::functional::softplus(weight_rho);
  }
  torch::Tensor bias_sigma() const {
    return torch::nn::functional::softplus(bias_rho);
  }
  /// KL( N(mu, sigma^2) || N(0,1) ), summed over weights and biases.
  torch::Tensor kl() const;
};

/// Dense layer with a Flipout-estimated weight perturbation: the batch
/// shares one Gaussian draw, decorrelated per example by rank-1 sign
/// flips. With sample=false the forward uses the posterior means and is
/// deterministic.
struct FlipoutLinearImpl : torch::nn::Module {
  FlipoutLinearImpl(int64_t in_features, int64_t out_features);

  torch::Tensor forward(const torch::Tensor& x, bool sample = true,
                        std::optional<at::Generator> gen = std::nullopt);
  torch::Tensor kl() const { return params.kl(); }

  /// Plain per-batch reparameterized sample, no Flipout decorrelation.
  /// Kept for distribution-equivalence checks against forward().
  torch::Tensor forward_reparam(const torch::Tensor& x,
                                std::optional<at::Generator> gen);

  int64_t in_features, out_features;
  VariationalParams params;
};
TORCH_MODULE(FlipoutLinear);

/// 2-D convolution with Flipout-estimated weight perturbations.
struct FlipoutConv2dImpl : torch::nn::Module {
  FlipoutConv2dImpl(int64_t in_channels, int64_t out_channels,
                    int64_t kernel, int64_t stride, int64_t padding);

  torch::Tensor forward(const torch::Tensor& x, bool sample = true,
                        std::optional<at::Generator> gen = std::nullopt);
  torch::Tensor kl() const { return params.kl(); }

  int64_t in_channels, out_channels, kernel, stride, padding;
  VariationalParams params;
};
TORCH_MODULE(FlipoutConv2d);

}  // namespace gwin
