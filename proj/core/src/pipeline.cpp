#include "gwin/pipeline.hpp"

namespace gwin {

InferenceResult infer(BayesClassifier& clf, Generator& G,
                      const torch::Tensor& x, double tau, int64_t mc_samples,
                      uint64_t seed) {
  auto batch = x.dim() == 3 ? x.unsqueeze(0) : x;
  auto initial = predict_with_certainty(clf, batch, mc_samples, seed,
                                        /*keep_draws=*/false);
  const auto y0 = initial.labels.item<int64_t>();
  const auto c0 = initial.certainty.item<double>();
  auto decision = reject(c0, y0, tau);
  if (decision.accepted)
    return {y0, InferencePath::Direct, y0, c0, std::nullopt, std::nullopt, tau};

  auto z = sample_noise(1, G->noise_dim, seed ^ 0xa24baed4963ee407ULL);
  torch::Tensor transformed;
  {
    torch::NoGradGuard no_grad;
    transformed = G->forward(batch, z);
  }
  auto post = predict_with_certainty(clf, transformed, mc_samples,
                                     seed + 1, /*keep_draws=*/false);
  const auto y1 = post.labels.item<int64_t>();
  const auto c1 = post.certainty.item<double>();
  return {y1, InferencePath::Transformed, y0, c0, y1, c1, tau};
}

std::vector<InferenceResult> infer_batch(BayesClassifier& clf, Generator& G,
                                         const torch::Tensor& x, double tau,
                                         int64_t mc_samples, uint64_t seed) {
  std::vector<InferenceResult> out;
  out.reserve(x.size(0));
  for (int64_t i = 0; i < x.size(0); ++i)
    out.push_back(infer(clf, G, x[i], tau, mc_samples, seed + uint64_t(i)));
  return out;
}

}  // namespace gwin
