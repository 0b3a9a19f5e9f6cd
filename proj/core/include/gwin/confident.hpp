#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "gwin/classifier.hpp"
#include "gwin/dataset.hpp"

namespace gwin {

/// Index view of the training examples the frozen classifier labels
/// correctly with certainty >= tau_star. The critic's "real"
/// distribution. Construction metadata is kept so membership can be
/// re-verified with the exact sampling pass that built it.
struct ConfidentSubset {
  std::vector<int64_t> member_indices;  // unique, sorted
  double tau_star = 0.95;
  int64_t mc_samples = 10;
  uint64_t sampling_seed = 0;
  int64_t batch_size = 256;           // batching affects the RNG stream
  std::string classifier_hash;
  std::string base_name;

  int64_t size() const { return int64_t(member_indices.size()); }
  torch::Tensor index_tensor() const;
};

/// One fixed sampling pass over the training set; examples whose
/// predicted label matches ground truth with certainty >= tau_star are
/// kept. Throws UntrainedClassifier if the model was never trained.
ConfidentSubset build_confident_subset(const LabeledImageSet& train,
                                       BayesClassifier& clf, double tau_star,
                                       int64_t mc_samples, uint64_t seed,
                                       int64_t batch_size = 256);

/// Replays the construction pass and checks the stored membership still
/// holds exactly. Returns false on any discrepancy.
bool verify_confident_subset(const ConfidentSubset& subset,
                             const LabeledImageSet& train,
                             BayesClassifier& clf);

// JSON sidecar persistence (indices + tau*, seed, classifier hash).
void save_confident_subset(const ConfidentSubset& subset,
                           const std::filesystem::path& path);
ConfidentSubset load_confident_subset(const std::filesystem::path& path);

}  // namespace gwin
