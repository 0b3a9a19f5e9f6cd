#include <cmath>

#include "doctest.h"
#include "gwin/bayes_layers.hpp"

using namespace gwin;

TEST_CASE("mean-weight forward is deterministic") {
  torch::manual_seed(0);
  FlipoutLinear layer(16, 4);
  auto x = torch::randn({3, 16});
  auto a = layer->forward(x, /*sample=*/false);
  auto b = layer->forward(x, /*sample=*/false);
  CHECK(a.equal(b));
}

TEST_CASE("sampled forwards differ across draws but follow the generator") {
  torch::manual_seed(0);
  FlipoutLinear layer(16, 4);
  auto x = torch::randn({3, 16});
  auto g1 = make_rng(42);
  auto g2 = make_rng(42);
  auto a = layer->forward(x, true, g1);
  auto b = layer->forward(x, true, g2);
  CHECK(a.equal(b));
  auto c = layer->forward(x, true, g1);  // stream advanced
  CHECK_FALSE(a.equal(c));
}

TEST_CASE("KL is zero at the prior and positive elsewhere") {
  FlipoutLinear layer(8, 2);
  {
    torch::NoGradGuard ng;
    layer->params.weight_mu.zero_();
    layer->params.bias_mu.zero_();
    // softplus(rho) = 1  =>  rho = ln(e - 1)
    const double rho1 = std::log(std::exp(1.0) - 1.0);
    layer->params.weight_rho.fill_(rho1);
    layer->params.bias_rho.fill_(rho1);
  }
  CHECK(layer->kl().item<double>() == doctest::Approx(0.0).epsilon(1e-6));
  {
    torch::NoGradGuard ng;
    layer->params.weight_mu.fill_(0.3);
  }
  CHECK(layer->kl().item<double>() > 0.0);
}

// With batch size 1 the Flipout sign flips are a single rank-1
// decorrelation, so the forward must match a plain reparameterized
// sample in distribution. Compare mean and variance of the outputs over
// many draws on one fixed input, within 3 standard errors.
TEST_CASE("flipout matches reparameterization in distribution (batch 1)") {
  torch::manual_seed(7);
  FlipoutLinear layer(12, 3);
  {
    // Inflate the posterior scales so the sampling noise dominates.
    torch::NoGradGuard ng;
    layer->params.weight_rho.fill_(-0.5);
    layer->params.bias_rho.fill_(-0.5);
  }
  auto x = torch::randn({1, 12});
  const int64_t n = 12000;
  auto gen_a = make_rng(100);
  auto gen_b = make_rng(200);
  torch::Tensor flip = torch::zeros({n, 3});
  torch::Tensor rep = torch::zeros({n, 3});
  {
    torch::NoGradGuard ng;
    for (int64_t i = 0; i < n; ++i) {
      flip[i] = layer->forward(x, true, gen_a).squeeze(0);
      rep[i] = layer->forward_reparam(x, gen_b).squeeze(0);
    }
  }
  auto mean_f = flip.mean(0), mean_r = rep.mean(0);
  auto var_f = flip.var(0), var_r = rep.var(0);
  for (int64_t j = 0; j < 3; ++j) {
    const double vf = var_f[j].item<double>();
    const double vr = var_r[j].item<double>();
    const double se_mean = std::sqrt((vf + vr) / double(n));
    CHECK(std::abs(mean_f[j].item<double>() - mean_r[j].item<double>()) <=
          3.0 * se_mean);
    const double se_var = (vf + vr) * std::sqrt(2.0 / double(n - 1));
    CHECK(std::abs(vf - vr) <= 3.0 * se_var);
  }
}

TEST_CASE("flipout conv output shape and determinism") {
  torch::manual_seed(1);
  FlipoutConv2d conv(1, 6, 5, 1, 2);
  auto x = torch::rand({2, 1, 28, 28});
  auto g1 = make_rng(5);
  auto g2 = make_rng(5);
  auto a = conv->forward(x, true, g1);
  CHECK(a.sizes() == torch::IntArrayRef({2, 6, 28, 28}));
  CHECK(a.equal(conv->forward(x, true, g2)));
  CHECK(conv->forward(x, false).equal(conv->forward(x, false)));
}
