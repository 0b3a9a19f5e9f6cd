#pragma once

#include <optional>

#include "gwin/classifier.hpp"
#include "gwin/generator.hpp"
#include "gwin/rejection.hpp"

namespace gwin {

enum class InferencePath { Direct, Transformed };

struct InferenceResult {
  int64_t final_label;
  InferencePath path;
  // Initial prediction, and the post-transformation prediction when the
  // observation was rejected.
  int64_t initial_label;
  double initial_certainty;
  std::optional<int64_t> post_label;
  std::optional<double> post_certainty;
  double tau;
};

/// Classify-reject-transform-relabel for one observation. A rejected
/// input costs exactly one generator pass and one extra certainty pass.
InferenceResult infer(BayesClassifier& clf, Generator& G,
                      const torch::Tensor& x, double tau, int64_t mc_samples,
                      uint64_t seed);

/// Batch variant; one noise draw per rejected example.
std::vector<InferenceResult> infer_batch(BayesClassifier& clf, Generator& G,
                                         const torch::Tensor& x, double tau,
                                         int64_t mc_samples, uint64_t seed);

}  // namespace gwin
