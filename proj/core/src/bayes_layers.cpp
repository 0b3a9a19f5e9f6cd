#include "gwin/bayes_layers.hpp"

#include <cmath>

namespace gwin {

namespace F = torch::nn::functional;

// Posterior scales start near softplus(-5) ~= 6.7e-3 so early training is
// close to a deterministic net.
constexpr double kRhoInit = -5.0;

at::Generator make_rng(uint64_t seed) {
  auto gen = at::detail::createCPUGenerator();
  gen.set_current_seed(seed);
  return gen;
}

torch::Tensor rand_sign(torch::IntArrayRef sizes,
                        std::optional<at::Generator> gen,
                        torch::TensorOptions opts) {
  auto bits = torch::randint(0, 2, sizes, gen, opts);
  return bits * 2.0 - 1.0;
}

torch::Tensor VariationalParams::kl() const {
  auto term = [](const torch::Tensor& mu, const torch::Tensor& sigma) {
    return (-sigma.log() + (sigma.pow(2) + mu.pow(2)) * 0.5 - 0.5).sum();
  };
  return term(weight_mu, weight_sigma()) + term(bias_mu, bias_sigma());
}

namespace {

VariationalParams init_params(torch::nn::Module& m,
                              torch::IntArrayRef weight_shape,
                              int64_t out_features, int64_t fan_in) {
  VariationalParams p;
  const double std = std::sqrt(2.0 / double(fan_in));
  p.weight_mu = m.register_parameter(
      "weight_mu", torch::randn(weight_shape) * std);
  p.weight_rho = m.register_parameter(
      "weight_rho", torch::full(weight_shape, kRhoInit));
  p.bias_mu = m.register_parameter("bias_mu", torch::zeros({out_features}));
  p.bias_rho = m.register_parameter(
      "bias_rho", torch::full({out_features}, kRhoInit));
  return p;
}

torch::Tensor sample_bias(const VariationalParams& p,
                          std::optional<at::Generator> gen) {
  auto eps = torch::randn(p.bias_mu.sizes(), gen, p.bias_mu.options());
  return p.bias_mu + p.bias_sigma() * eps;
}

}  // namespace

FlipoutLinearImpl::FlipoutLinearImpl(int64_t in, int64_t out)
    : in_features(in), out_features(out) {
  params = init_params(*this, {out, in}, out, in);
}

torch::Tensor FlipoutLinearImpl::forward(const torch::Tensor& x, bool sample,
                                         std::optional<at::Generator> gen) {
  if (!sample) return F::linear(x, params.weight_mu, params.bias_mu);
  const int64_t b = x.size(0);
  auto opts = params.weight_mu.options();
  auto eps = torch::randn(params.weight_mu.sizes(), gen, opts);
  auto sign_in = rand_sign({b, in_features}, gen, opts);
  auto sign_out = rand_sign({b, out_features}, gen, opts);
  auto mean_out = x.matmul(params.weight_mu.t());
  auto pert = (x * sign_in).matmul((params.weight_sigma() * eps).t()) * sign_out;
  return mean_out + pert + sample_bias(params, gen);
}

torch::Tensor FlipoutLinearImpl::forward_reparam(
    const torch::Tensor& x, std::optional<at::Generator> gen) {
  auto eps = torch::randn(params.weight_mu.sizes(), gen,
                          params.weight_mu.options());
  auto w = params.weight_mu + params.weight_sigma() * eps;
  return F::linear(x, w, sample_bias(params, gen));
}

FlipoutConv2dImpl::FlipoutConv2dImpl(int64_t in_c, int64_t out_c,
                                     int64_t kernel, int64_t stride,
                                     int64_t padding)
    : in_channels(in_c), out_channels(out_c), kernel(kernel), stride(stride),
      padding(padding) {
  params = init_params(*this, {out_c, in_c, kernel, kernel}, out_c,
                       in_c * kernel * kernel);
}

torch::Tensor FlipoutConv2dImpl::forward(const torch::Tensor& x, bool sample,
                                         std::optional<at::Generator> gen) {
  auto opts = F::Conv2dFuncOptions().stride(stride).padding(padding);
  if (!sample)
    return F::conv2d(x, params.weight_mu,
                     F::Conv2dFuncOptions().stride(stride).padding(padding).bias(
                         params.bias_mu));
  auto mean_out = F::conv2d(x, params.weight_mu, opts);
  const int64_t b = x.size(0);
  auto topts = params.weight_mu.options();
  auto eps = torch::randn(params.weight_mu.sizes(), gen, topts);
  auto sign_in = rand_sign({b, in_channels, 1, 1}, gen, topts);
  auto sign_out = rand_sign({b, out_channels, 1, 1}, gen, topts);
  auto pert = F::conv2d(x * sign_in, params.weight_sigma() * eps, opts) * sign_out;
  auto bias = sample_bias(params, gen).view({1, out_channels, 1, 1});
  return mean_out + pert + bias;
}

}  // namespace gwin
