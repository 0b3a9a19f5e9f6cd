#pragma once

#include <filesystem>
#include <functional>
#include <utility>
#include <vector>

#include "gwin/classifier.hpp"
#include "gwin/confident.hpp"
#include "gwin/critic.hpp"
#include "gwin/generator.hpp"

namespace gwin {

struct GwinTrainConfig {
  double lambda_gp = 10.0;
  double lambda_loss = 10.0;
  int64_t n_critic = 5;
  int64_t batch_size = 128;
  double adam_lr = 1e-4;
  double adam_beta1 = 0.5;
  double adam_beta2 = 0.9;
  double tau_star = 0.95;
  int64_t generator_iterations = 200000;
  // Alternative reading of the iteration budget: when true, the budget
  // counts every parameter update (critic and generator combined).
  bool count_total_updates = false;
  uint64_t seed = 0;
  int64_t noise_dim = 100;
  int64_t generator_channels = 256;
  int64_t critic_channels = 64;
  int64_t checkpoint_every = 5000;
  int64_t log_every = 100;
  std::filesystem::path out_dir;  // empty: no checkpoints / metric log
};

struct GwinMetrics {
  int64_t iteration;
  double critic_loss;
  double gen_loss;
  double gp_term;       // lambda-free gradient-penalty value
  double penalty_term;  // lambda-free transformation-penalty value
  double wall_time;     // seconds since training start
};

enum class BatchSource { ConfidentReal, FullTrain };

struct GwinTrainHooks {
  // Called with the dataset indices of every sampled batch. The critic
  // only ever sees ConfidentReal batches (plus generator output).
  std::function<void(BatchSource, const std::vector<int64_t>&)> on_batch;
  std::function<void(const GwinMetrics&)> on_metrics;
};

/// Adversarial training loop: per generator step, n_critic critic updates
/// on confident-subset samples (WGAN loss + gradient penalty), then one
/// generator update on full-training-distribution samples with the
/// transformation penalty. The classifier is frozen throughout.
std::pair<Generator, Critic> train_gwin(const ConfidentSubset& confident,
                                        const LabeledImageSet& full_train,
                                        BayesClassifier& clf,
                                        const GwinTrainConfig& cfg,
                                        const GwinTrainHooks& hooks = {});

}  // namespace gwin
