#include <benchmark/benchmark.h>

#include "gwin/gwin.hpp"

using namespace gwin;

namespace {

void BM_ClassifierSampledForward(benchmark::State& state) {
  torch::NoGradGuard ng;
  torch::manual_seed(0);
  BayesClassifier clf(lenet5_bnn_spec());
  clf->eval();
  auto x = torch::rand({state.range(0), 1, 28, 28});
  auto gen = make_rng(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(clf->forward(x, true, gen));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ClassifierSampledForward)->Arg(1)->Arg(32)->Arg(128);

void BM_ClassifierCertainty(benchmark::State& state) {
  torch::manual_seed(0);
  BayesClassifier clf(lenet5_bnn_spec());
  clf->trained = true;
  clf->eval();
  auto x = torch::rand({32, 1, 28, 28});
  for (auto _ : state)
    benchmark::DoNotOptimize(
        predict_with_certainty(clf, x, state.range(0), 7, false));
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_ClassifierCertainty)->Arg(1)->Arg(10);

void BM_GeneratorForward(benchmark::State& state) {
  torch::NoGradGuard ng;
  torch::manual_seed(0);
  Generator G;
  auto x = torch::rand({state.range(0), 1, 28, 28});
  auto z = sample_noise(state.range(0), G->noise_dim, 3);
  for (auto _ : state) benchmark::DoNotOptimize(G->forward(x, z));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GeneratorForward)->Arg(1)->Arg(32)->Arg(128);

void BM_CriticForward(benchmark::State& state) {
  torch::NoGradGuard ng;
  torch::manual_seed(0);
  Critic D;
  auto x = torch::rand({state.range(0), 1, 28, 28});
  auto y = torch::randint(0, 10, {state.range(0)});
  for (auto _ : state) benchmark::DoNotOptimize(D->forward(x, y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CriticForward)->Arg(1)->Arg(32)->Arg(128);

void BM_GradientPenalty(benchmark::State& state) {
  torch::manual_seed(0);
  Critic D;
  auto critic_fn = [&D](const torch::Tensor& xs, const torch::Tensor& ys) {
    return D->forward(xs, ys);
  };
  auto x_real = torch::rand({state.range(0), 1, 28, 28});
  auto x_fake = torch::rand({state.range(0), 1, 28, 28});
  auto y = torch::randint(0, 10, {state.range(0)});
  auto eps = torch::rand({state.range(0)});
  for (auto _ : state)
    benchmark::DoNotOptimize(gradient_penalty(critic_fn, x_real, x_fake, y, eps));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GradientPenalty)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
