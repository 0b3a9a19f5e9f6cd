#include "gwin/gwin_train.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "gwin/checkpoint.hpp"

namespace gwin {

namespace {

std::vector<int64_t> sample_indices(std::mt19937_64& rng,
                                    const std::vector<int64_t>& pool,
                                    int64_t m) {
  std::vector<int64_t> out(m);
  for (int64_t i = 0; i < m; ++i) out[i] = pool[rng() % pool.size()];
  return out;
}

std::vector<int64_t> iota_pool(int64_t n) {
  std::vector<int64_t> pool(n);
  for (int64_t i = 0; i < n; ++i) pool[i] = i;
  return pool;
}

}  // namespace

std::pair<Generator, Critic> train_gwin(const ConfidentSubset& confident,
                                        const LabeledImageSet& full_train,
                                        BayesClassifier& clf,
                                        const GwinTrainConfig& cfg,
                                        const GwinTrainHooks& hooks) {
  if (confident.size() == 0)
    throw EmptyConfidentSubset("confident subset is empty");
  clf->freeze();

  torch::manual_seed(cfg.seed);
  Generator G(cfg.noise_dim, cfg.generator_channels);
  Critic D(cfg.critic_channels);

  auto adam_opts = [&](double lr) {
    return torch::optim::AdamOptions(lr).betas(
        {cfg.adam_beta1, cfg.adam_beta2});
  };
  torch::optim::Adam critic_optim(D->parameters(), adam_opts(cfg.adam_lr));
  torch::optim::Adam gen_optim(G->parameters(), adam_opts(cfg.adam_lr));

  std::mt19937_64 idx_rng(cfg.seed ^ 0xd1b54a32d192ed03ULL);
  auto draw_gen = make_rng(cfg.seed ^ 0x94d049bb133111ebULL);
  const auto full_pool = iota_pool(full_train.size());
  const int64_t m = cfg.batch_size;

  int64_t gen_iters = cfg.generator_iterations;
  if (cfg.count_total_updates)
    gen_iters = (cfg.generator_iterations + cfg.n_critic) / (cfg.n_critic + 1);

  std::ofstream metrics_log;
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    metrics_log.open(cfg.out_dir / "metrics.ndjson");
  }
  const auto t0 = std::chrono::steady_clock::now();
  auto critic_fn = [&](const torch::Tensor& xin, const torch::Tensor& yin) {
    return D->forward(xin, yin);
  };

  double last_critic_loss = 0.0, last_gp = 0.0;
  for (int64_t it = 1; it <= gen_iters; ++it) {
    for (int64_t t = 0; t < cfg.n_critic; ++t) {
      auto idx = sample_indices(idx_rng, confident.member_indices, m);
      if (hooks.on_batch) hooks.on_batch(BatchSource::ConfidentReal, idx);
      auto ridx = torch::tensor(idx, torch::kInt64);
      auto x = full_train.images.index_select(0, ridx);
      auto y = full_train.labels.index_select(0, ridx);
      auto z = torch::randn({m, cfg.noise_dim}, draw_gen, torch::kFloat32);
      torch::Tensor x_fake;
      {
        torch::NoGradGuard no_grad;
        x_fake = G->forward(x, z);
      }
      auto eps = torch::rand({m}, draw_gen, torch::kFloat32);
      critic_optim.zero_grad();
      auto gp = gradient_penalty(critic_fn, x, x_fake, y, eps);
      auto loss = D->forward(x_fake, y).mean() - D->forward(x, y).mean() +
                  cfg.lambda_gp * gp;
      last_critic_loss = loss.item<double>();
      last_gp = gp.item<double>();
      if (!std::isfinite(last_critic_loss))
        throw DivergedTraining("non-finite critic loss at iteration " +
                               std::to_string(it));
      loss.backward();
      critic_optim.step();
    }

    auto idx = sample_indices(idx_rng, full_pool, m);
    if (hooks.on_batch) hooks.on_batch(BatchSource::FullTrain, idx);
    auto ridx = torch::tensor(idx, torch::kInt64);
    auto x = full_train.images.index_select(0, ridx);
    auto y = full_train.labels.index_select(0, ridx);
    auto z = torch::randn({m, cfg.noise_dim}, draw_gen, torch::kFloat32);
    gen_optim.zero_grad();
    auto x_fake = G->forward(x, z);
    // One stochastic classifier draw per generator step.
    auto penalty =
        classifier_nll(clf, x_fake, y, cfg.seed + 0x5bf03635ULL * it);
    auto gen_loss =
        -D->forward(x_fake, y).mean() + cfg.lambda_loss * penalty;
    const double gen_loss_v = gen_loss.item<double>();
    if (!std::isfinite(gen_loss_v))
      throw DivergedTraining("non-finite generator loss at iteration " +
                             std::to_string(it));
    gen_loss.backward();
    gen_optim.step();

    if (hooks.on_metrics || metrics_log.is_open()) {
      if (it % cfg.log_every == 0 || it == gen_iters) {
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        GwinMetrics mtr{it, last_critic_loss, gen_loss_v, last_gp,
                        penalty.item<double>(), wall};
        if (hooks.on_metrics) hooks.on_metrics(mtr);
        if (metrics_log.is_open()) {
          nlohmann::json j{{"iteration", mtr.iteration},
                           {"critic_loss", mtr.critic_loss},
                           {"gen_loss", mtr.gen_loss},
                           {"gp_term", mtr.gp_term},
                           {"penalty_term", mtr.penalty_term},
                           {"wall_time", mtr.wall_time}};
          metrics_log << j.dump() << "\n";
        }
      }
    }
    if (!cfg.out_dir.empty() &&
        (it % cfg.checkpoint_every == 0 || it == gen_iters)) {
      save_checkpoint(*G, cfg.out_dir / ("generator_" + std::to_string(it) +
                                         ".pt"),
                      "generator");
      save_checkpoint(*D,
                      cfg.out_dir / ("critic_" + std::to_string(it) + ".pt"),
                      "critic");
    }
  }
  return {G, D};
}

}  // namespace gwin
