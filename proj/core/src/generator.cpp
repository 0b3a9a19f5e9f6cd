#include "gwin/generator.hpp"

#include "gwin/bayes_layers.hpp"

namespace gwin {

torch::Tensor sample_noise(int64_t m, int64_t noise_dim, uint64_t seed) {
  auto gen = make_rng(seed);
  return torch::randn({m, noise_dim}, gen, torch::kFloat32);
}

GeneratorImpl::GeneratorImpl(int64_t noise_dim, int64_t base_channels)
    : noise_dim(noise_dim), base_channels(base_channels) {
  const int64_t c0 = base_channels;       // 4x4 feature depth
  const int64_t c1 = base_channels / 2;   // after first upsample
  const int64_t c2 = base_channels / 4;   // after second upsample
  fc = register_module(
      "fc", torch::nn::Linear(28 * 28 + noise_dim, 4 * 4 * c0));
  auto up_opts = [](int64_t in, int64_t out) {
    return torch::nn::ConvTranspose2dOptions(in, out, 5)
        .stride(2)
        .padding(2)
        .output_padding(1);
  };
  up1 = register_module("up1", torch::nn::ConvTranspose2d(up_opts(c0, c1)));
  up2 = register_module("up2", torch::nn::ConvTranspose2d(up_opts(c1, c2)));
  up3 = register_module("up3", torch::nn::ConvTranspose2d(up_opts(c2, 1)));
}

torch::Tensor GeneratorImpl::forward(const torch::Tensor& x,
                                     const torch::Tensor& z) {
  if (x.dim() != 4 || x.size(2) != 28 || x.size(3) != 28)
    throw ShapeMismatch("generator expects (B,1,28,28) images");
  if (z.dim() != 2 || z.size(1) != noise_dim || z.size(0) != x.size(0))
    throw ShapeMismatch("noise batch must be (B," +
                        std::to_string(noise_dim) + ")");
  const int64_t b = x.size(0);
  auto h = torch::cat({x.flatten(1), z}, 1);
  h = torch::relu(fc->forward(h)).view({b, base_channels, 4, 4});
  h = torch::relu(up1->forward(h));                 // (B,c1,8,8)
  h = h.slice(2, 0, 7).slice(3, 0, 7);              // crop to 7x7
  h = torch::relu(up2->forward(h));                 // (B,c2,14,14)
  ++forward_passes;
  return torch::sigmoid(up3->forward(h));           // (B,1,28,28)
}

}  // namespace gwin
