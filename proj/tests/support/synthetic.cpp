#include "support/synthetic.hpp"

#include <random>

namespace gwin::testsupport {

namespace {

constexpr double kAnchor0 = 9.0, kAnchor1 = 19.0, kSigma = 3.0;

LabeledImageSet render(const std::vector<std::array<double, 2>>& centers,
                       const std::vector<int64_t>& labels, double noise,
                       std::mt19937_64& rng, const std::string& name) {
  const int64_t n = int64_t(centers.size());
  auto images = torch::zeros({n, 1, 28, 28}, torch::kFloat32);
  auto acc = images.accessor<float, 4>();
  std::uniform_real_distribution<double> u(0.0, noise);
  for (int64_t k = 0; k < n; ++k) {
    const double cy = centers[k][0], cx = centers[k][1];
    for (int64_t i = 0; i < 28; ++i) {
      for (int64_t j = 0; j < 28; ++j) {
        const double d2 = (i - cy) * (i - cy) + (j - cx) * (j - cx);
        double v = std::exp(-d2 / (2.0 * kSigma * kSigma));
        if (noise > 0.0) v = std::min(1.0, v + u(rng));
        acc[k][0][i][j] = float(v);
      }
    }
  }
  return {images, torch::tensor(labels, torch::kInt64), name};
}

}  // namespace

LabeledImageSet make_blobs(int64_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> jitter(0.0, 1.2);
  std::vector<std::array<double, 2>> centers;
  std::vector<int64_t> labels;
  for (int64_t k = 0; k < n; ++k) {
    const int64_t y = int64_t(rng() % 2);
    const double anchor = y == 0 ? kAnchor0 : kAnchor1;
    centers.push_back({anchor + jitter(rng), anchor + jitter(rng)});
    labels.push_back(y);
  }
  return render(centers, labels, 0.05, rng, "blobs");
}

LabeledImageSet make_ambiguous_blobs(int64_t n, uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0xabcddcba12344321ULL);
  std::uniform_real_distribution<double> off(0.5, 2.5);
  std::normal_distribution<double> jitter(0.0, 0.8);
  std::vector<std::array<double, 2>> centers;
  std::vector<int64_t> labels;
  const double mid = (kAnchor0 + kAnchor1) / 2.0;
  for (int64_t k = 0; k < n; ++k) {
    const int64_t y = int64_t(rng() % 2);
    const double shift = y == 0 ? -off(rng) : off(rng);
    centers.push_back({mid + shift + jitter(rng), mid + shift + jitter(rng)});
    labels.push_back(y);
  }
  return render(centers, labels, 0.25, rng, "blobs/ambiguous");
}

LabeledImageSet make_inverted_blobs(int64_t n, uint64_t seed) {
  auto set = make_blobs(n, seed ^ 0x517cc1b727220a95ULL);
  set.images = 1.0f - set.images;
  set.name = "blobs/inverted";
  return set;
}

ArchitectureSpec toy_classifier_spec() {
  ArchitectureSpec s;
  s.name = "toy_blob";
  s.input = {1, 28, 28};
  s.layers = {
      {.kind = LayerKind::Flatten},
      {.kind = LayerKind::FlipoutDense, .filters = 32, .act = Activation::ReLU},
      {.kind = LayerKind::FlipoutDense, .filters = 10},
  };
  return s;
}

BayesClassifier train_toy_classifier(const LabeledImageSet& train,
                                     uint64_t seed, int64_t epochs) {
  TrainClassifierOptions opts;
  opts.epochs = epochs;
  opts.batch_size = 32;
  opts.seed = seed;
  return train_classifier(train, toy_classifier_spec(), opts);
}

}  // namespace gwin::testsupport
