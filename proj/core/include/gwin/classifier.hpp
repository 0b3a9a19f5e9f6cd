#pragma once

#include <torch/torch.h>

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "gwin/architecture.hpp"
#include "gwin/bayes_layers.hpp"
#include "gwin/dataset.hpp"
#include "gwin/errors.hpp"

namespace gwin {

enum class CertaintyStat { Median, Mean };

/// One batch of (label, certainty) predictions. Certainty is the median
/// (or mean, if configured) over Monte Carlo draws of the softmax
/// probability of the predicted class; the predicted class is the argmax
/// of the mean logits across draws.
struct CertaintyBatch {
  torch::Tensor labels;          // (B,) int64
  torch::Tensor certainty;       // (B,) float32
  torch::Tensor mean_logits;     // (B,10)
  torch::Tensor per_draw_probs;  // (S,B,10); empty if not retained
};

/// Stochastic-weight convolutional classifier assembled from an
/// ArchitectureSpec built of Flipout layers.
struct BayesClassifierImpl : torch::nn::Module {
  explicit BayesClassifierImpl(ArchitectureSpec spec);

  /// One forward pass. sample=true draws weights through the Flipout
  /// estimator; sample=false uses posterior means and is deterministic.
  torch::Tensor forward(const torch::Tensor& x, bool sample = true,
                        std::optional<at::Generator> gen = std::nullopt);

  /// Sum of per-layer KL divergences to the N(0,1) weight prior.
  torch::Tensor kl() const;

  /// Drops gradient tracking on every parameter. The GWIN trains against
  /// a frozen classifier; gradients still flow to the *inputs*.
  void freeze();

  ArchitectureSpec spec;
  bool trained = false;
  int64_t epochs_trained = 0;
  std::string checkpoint_hash;
  mutable int64_t sampling_passes = 0;  // instrumentation for cost tests

 private:
  std::vector<FlipoutConv2d> convs_;
  std::vector<FlipoutLinear> dense_;
};
TORCH_MODULE(BayesClassifier);

struct TrainClassifierOptions {
  int64_t epochs = 30;
  double learning_rate = 1e-3;
  int64_t batch_size = 128;
  uint64_t seed = 0;
  std::function<void(int64_t epoch, double mean_loss)> on_epoch;
};

/// Minimizes the negative ELBO (mean NLL + KL / N) with Adam.
/// Throws DivergedTraining if the loss goes non-finite.
BayesClassifier train_classifier(const LabeledImageSet& train,
                                 const ArchitectureSpec& spec,
                                 const TrainClassifierOptions& opts);

/// mc_samples stochastic passes; deterministic given seed.
CertaintyBatch predict_with_certainty(BayesClassifier& clf,
                                      const torch::Tensor& x,
                                      int64_t mc_samples, uint64_t seed,
                                      bool keep_draws = true,
                                      CertaintyStat stat = CertaintyStat::Median);

/// Certainty statistic of a *chosen* class per example (e.g. the ground
/// truth label), from retained per-draw probabilities.
torch::Tensor class_certainty(const torch::Tensor& per_draw_probs,
                              const torch::Tensor& classes,
                              CertaintyStat stat = CertaintyStat::Median);

/// Mean NLL of labels y under one stochastic forward pass. Differentiable
/// with respect to x; never updates classifier parameters.
torch::Tensor classifier_nll(BayesClassifier& clf, const torch::Tensor& x,
                             const torch::Tensor& y, uint64_t seed);

/// Mean of -log softmax(logits)[y]. Shared by training and the
/// transformation penalty.
torch::Tensor nll_from_logits(const torch::Tensor& logits,
                              const torch::Tensor& y);

}  // namespace gwin
