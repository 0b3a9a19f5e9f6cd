#include "gwin/classifier.hpp"

#include <random>

namespace gwin {

namespace F = torch::nn::functional;

BayesClassifierImpl::BayesClassifierImpl(ArchitectureSpec s)
    : spec(std::move(s)) {
  Shape cur = spec.input;
  const auto shapes = output_shapes(spec);
  int ci = 0, di = 0;
  for (size_t i = 0; i < spec.layers.size(); ++i) {
    const auto& l = spec.layers[i];
    switch (l.kind) {
      case LayerKind::FlipoutConv2d:
        convs_.push_back(register_module(
            "conv" + std::to_string(ci++),
            FlipoutConv2d(cur[0], l.filters, l.kernel, l.stride, l.padding)));
        break;
      case LayerKind::FlipoutDense: {
        const int64_t in = cur[1] == 0 ? cur[0] : cur[0] * cur[1] * cur[2];
        dense_.push_back(register_module(
            "dense" + std::to_string(di++), FlipoutLinear(in, l.filters)));
        break;
      }
      case LayerKind::MaxPool2d:
      case LayerKind::Flatten:
        break;
      default:
        throw std::invalid_argument(
            "classifier spec may only contain Flipout/pool/flatten layers");
    }
    cur = shapes[i];
  }
}

torch::Tensor BayesClassifierImpl::forward(const torch::Tensor& x, bool sample,
                                           std::optional<at::Generator> gen) {
  if (x.dim() != 4 || x.size(1) != spec.input[0])
    throw ShapeMismatch("classifier expects (B,C,H,W) input");
  torch::Tensor h = x;
  int ci = 0, di = 0;
  for (const auto& l : spec.layers) {
    switch (l.kind) {
      case LayerKind::FlipoutConv2d:
        h = convs_[ci++]->forward(h, sample, gen);
        break;
      case LayerKind::MaxPool2d:
        h = F::max_pool2d(h, F::MaxPool2dFuncOptions(l.kernel).stride(l.stride));
        break;
      case LayerKind::Flatten:
        h = h.flatten(1);
        break;
      case LayerKind::FlipoutDense:
        if (h.dim() > 2) h = h.flatten(1);
        h = dense_[di++]->forward(h, sample, gen);
        break;
      default:
        break;
    }
    if (l.act == Activation::ReLU) h = torch::relu(h);
    if (l.dropout > 0.0)
      h = F::dropout(h, F::DropoutFuncOptions().p(l.dropout).training(is_training()));
  }
  ++sampling_passes;
  return h;
}

torch::Tensor BayesClassifierImpl::kl() const {
  torch::Tensor total = torch::zeros({});
  for (const auto& c : convs_) total = total + c->kl();
  for (const auto& d : dense_) total = total + d->kl();
  return total;
}

void BayesClassifierImpl::freeze() {
  for (auto& p : parameters()) p.set_requires_grad(false);
}

torch::Tensor nll_from_logits(const torch::Tensor& logits,
                              const torch::Tensor& y) {
  return F::nll_loss(F::log_softmax(logits, 1), y);
}

BayesClassifier train_classifier(const LabeledImageSet& train,
                                 const ArchitectureSpec& spec,
                                 const TrainClassifierOptions& opts) {
  torch::manual_seed(opts.seed);
  BayesClassifier clf(spec);
  clf->train();
  auto gen = make_rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
  torch::optim::Adam optim(clf->parameters(),
                           torch::optim::AdamOptions(opts.learning_rate));
  const int64_t n = train.size();
  std::vector<int64_t> order(n);
  for (int64_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 shuffle_rng(opts.seed + 1);

  for (int64_t epoch = 0; epoch < opts.epochs; ++epoch) {
    for (int64_t i = n - 1; i > 0; --i)
      std::swap(order[i], order[shuffle_rng() % uint64_t(i + 1)]);
    double loss_sum = 0.0;
    int64_t batches = 0;
    for (int64_t start = 0; start < n; start += opts.batch_size) {
      const int64_t end = std::min(n, start + opts.batch_size);
      auto idx = torch::from_blob(order.data() + start, {end - start},
                                  torch::kInt64);
      auto x = train.images.index_select(0, idx);
      auto y = train.labels.index_select(0, idx);
      optim.zero_grad();
      auto logits = clf->forward(x, /*sample=*/true, gen);
      auto loss = nll_from_logits(logits, y) + clf->kl() / double(n);
      if (!std::isfinite(loss.item<double>()))
        throw DivergedTraining("non-finite classifier loss at epoch " +
                               std::to_string(epoch));
      loss.backward();
      optim.step();
      loss_sum += loss.item<double>();
      ++batches;
    }
    clf->epochs_trained = epoch + 1;
    if (opts.on_epoch) opts.on_epoch(epoch, loss_sum / double(batches));
  }
  clf->trained = true;
  clf->eval();
  return clf;
}

namespace {

torch::Tensor reduce_draws(const torch::Tensor& vals, CertaintyStat stat) {
  if (stat == CertaintyStat::Mean) return vals.mean(0);
  const int64_t s = vals.size(0);
  auto sorted = std::get<0>(vals.sort(0));
  if (s % 2 == 1) return sorted[s / 2];
  return (sorted[s / 2 - 1] + sorted[s / 2]) * 0.5;
}

}  // namespace

CertaintyBatch predict_with_certainty(BayesClassifier& clf,
                                      const torch::Tensor& x,
                                      int64_t mc_samples, uint64_t seed,
                                      bool keep_draws, CertaintyStat stat) {
  torch::NoGradGuard no_grad;
  const bool was_training = clf->is_training();
  clf->eval();
  auto gen = make_rng(seed);
  std::vector<torch::Tensor> logit_draws;
  logit_draws.reserve(mc_samples);
  for (int64_t s = 0; s < mc_samples; ++s)
    logit_draws.push_back(clf->forward(x, /*sample=*/true, gen));
  auto logits = torch::stack(logit_draws);          // (S,B,10)
  auto probs = torch::softmax(logits, 2);           // (S,B,10)
  auto mean_logits = logits.mean(0);                // (B,10)
  auto labels = mean_logits.argmax(1);              // (B,)
  auto label_probs = probs.gather(
      2, labels.view({1, -1, 1}).expand({mc_samples, labels.size(0), 1}));
  auto certainty = reduce_draws(label_probs.squeeze(2), stat);
  if (was_training) clf->train();
  return {labels, certainty, mean_logits,
          keep_draws ? probs : torch::Tensor()};
}

torch::Tensor class_certainty(const torch::Tensor& per_draw_probs,
                              const torch::Tensor& classes,
                              CertaintyStat stat) {
  const int64_t s = per_draw_probs.size(0), b = per_draw_probs.size(1);
  auto picked = per_draw_probs.gather(
      2, classes.view({1, b, 1}).expand({s, b, 1}));
  return reduce_draws(picked.squeeze(2), stat);
}

torch::Tensor classifier_nll(BayesClassifier& clf, const torch::Tensor& x,
                             const torch::Tensor& y, uint64_t seed) {
  const bool was_training = clf->is_training();
  clf->eval();
  auto gen = make_rng(seed);
  auto logits = clf->forward(x, /*sample=*/true, gen);
  if (was_training) clf->train();
  return nll_from_logits(logits, y);
}

}  // namespace gwin
