#pragma once

#include <torch/torch.h>

#include "gwin/errors.hpp"

namespace gwin {

/// Draws m standard-normal noise vectors, deterministic given seed.
torch::Tensor sample_noise(int64_t m, int64_t noise_dim, uint64_t seed);

/// Conditional generator G(x, z): the flattened 28x28 observation is
/// concatenated with the noise vector, lifted to a 4x4 feature map and
/// upsampled back to 28x28 through stride-2 transpose convolutions with
/// a sigmoid output. base_channels=256 is the full-size network; smaller
/// values give narrow variants for fast experiments.
struct GeneratorImpl : torch::nn::Module {
  explicit GeneratorImpl(int64_t noise_dim = 100, int64_t base_channels = 256);

  torch::Tensor forward(const torch::Tensor& x, const torch::Tensor& z);

  int64_t noise_dim;
  int64_t base_channels;
  mutable int64_t forward_passes = 0;  // instrumentation for cost tests

 private:
  torch::nn::Linear fc{nullptr};
  torch::nn::ConvTranspose2d up1{nullptr}, up2{nullptr}, up3{nullptr};
};
TORCH_MODULE(Generator);

}  // namespace gwin
