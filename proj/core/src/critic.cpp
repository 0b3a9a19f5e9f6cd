#include "gwin/critic.hpp"

namespace gwin {

namespace {

torch::Tensor label_planes(const torch::Tensor& y, int64_t h, int64_t w) {
  auto onehot = torch::one_hot(y, 10).to(torch::kFloat32);
  return onehot.view({y.size(0), 10, 1, 1}).expand({y.size(0), 10, h, w});
}

}  // namespace

CriticImpl::CriticImpl(int64_t base_channels) : base_channels(base_channels) {
  const int64_t c1n = base_channels, c2n = base_channels * 2,
                c3n = base_channels * 4;
  auto conv = [](int64_t in, int64_t out) {
    return torch::nn::Conv2dOptions(in, out, 5).stride(2).padding(2);
  };
  c1 = register_module("c1", torch::nn::Conv2d(conv(1 + 10, c1n)));
  c2 = register_module("c2", torch::nn::Conv2d(conv(c1n + 10, c2n)));
  c3 = register_module("c3", torch::nn::Conv2d(conv(c2n + 10, c3n)));
  fc = register_module("fc", torch::nn::Linear(4 * 4 * (c3n + 10), 1));
}

torch::Tensor CriticImpl::forward(const torch::Tensor& x,
                                  const torch::Tensor& y) {
  if (x.dim() != 4 || x.size(2) != 28 || x.size(3) != 28)
    throw ShapeMismatch("critic expects (B,1,28,28) images");
  if (y.size(0) != x.size(0))
    throw ShapeMismatch("label batch size mismatch");
  auto lrelu = [](const torch::Tensor& t) {
    return torch::leaky_relu(t, 0.2);
  };
  auto h = torch::cat({x, label_planes(y, 28, 28)}, 1);   // (B,11,28,28)
  h = lrelu(c1->forward(h));                              // (B,64,14,14)
  h = torch::cat({h, label_planes(y, 14, 14)}, 1);        // (B,74,14,14)
  h = lrelu(c2->forward(h));                              // (B,128,7,7)
  h = torch::cat({h, label_planes(y, 7, 7)}, 1);          // (B,138,7,7)
  h = lrelu(c3->forward(h));                              // (B,256,4,4)
  h = torch::cat({h, label_planes(y, 4, 4)}, 1);          // (B,266,4,4)
  return fc->forward(h.flatten(1)).squeeze(1);
}

torch::Tensor gradient_penalty(const CriticFn& critic,
                               const torch::Tensor& x_real,
                               const torch::Tensor& x_fake,
                               const torch::Tensor& y,
                               const torch::Tensor& eps) {
  auto e = eps.view({-1, 1, 1, 1});
  auto x_hat =
      (e * x_real.detach() + (1.0 - e) * x_fake.detach()).requires_grad_(true);
  auto scores = critic(x_hat, y);
  auto grads = torch::autograd::grad({scores.sum()}, {x_hat},
                                     /*grad_outputs=*/{},
                                     /*retain_graph=*/true,
                                     /*create_graph=*/true)[0];
  auto norms = grads.flatten(1).norm(2, 1);
  return (norms - 1.0).pow(2).mean();
}

}  // namespace gwin
