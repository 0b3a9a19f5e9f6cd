#include <cmath>

#include "doctest.h"
#include "gwin/gwin.hpp"
#include "support/synthetic.hpp"

using namespace gwin;
using namespace gwin::testsupport;

TEST_CASE("lenet5 output shape sequence matches the architecture table") {
  auto shapes = output_shapes(lenet5_bnn_spec());
  const std::vector<Shape> expected = {
      {6, 28, 28}, {6, 14, 14}, {16, 14, 14}, {16, 7, 7},
      {120, 7, 7}, {5880, 0, 0}, {84, 0, 0},  {10, 0, 0}};
  REQUIRE(shapes.size() == expected.size());
  for (size_t i = 0; i < expected.size(); ++i) CHECK(shapes[i] == expected[i]);
}

TEST_CASE("improved bnn output shape sequence matches the table") {
  auto shapes = output_shapes(improved_bnn_spec());
  const std::vector<Shape> expected = {
      {32, 26, 26}, {32, 24, 24}, {32, 12, 12}, {64, 10, 10}, {64, 8, 8},
      {64, 4, 4},   {1024, 0, 0}, {128, 0, 0},  {10, 0, 0}};
  REQUIRE(shapes.size() == expected.size());
  for (size_t i = 0; i < expected.size(); ++i) CHECK(shapes[i] == expected[i]);
}

TEST_CASE("classifier forward shapes for both baselines") {
  for (const auto& spec : {lenet5_bnn_spec(), improved_bnn_spec()}) {
    torch::manual_seed(0);
    BayesClassifier clf(spec);
    auto g = make_rng(1);
    auto out = clf->forward(torch::rand({2, 1, 28, 28}), true, g);
    CHECK(out.sizes() == torch::IntArrayRef({2, 10}));
  }
}

TEST_CASE("nll analytic values") {
  // Uniform 10-class output: -log(1/10) = ln 10.
  auto y = torch::tensor({0L, 3L, 9L});
  auto uniform = torch::zeros({3, 10});
  CHECK(nll_from_logits(uniform, y).item<double>() ==
        doctest::Approx(std::log(10.0)).epsilon(1e-6));

  // Probability ~1 on the true label: loss ~0.
  auto confident = torch::zeros({3, 10});
  for (int64_t i = 0; i < 3; ++i) confident[i][y[i].item<int64_t>()] = 100.0;
  CHECK(nll_from_logits(confident, y).item<double>() ==
        doctest::Approx(0.0).epsilon(1e-6));

  // Hand-built 3-example probability table; oracle is plain arithmetic.
  const double p_true[3] = {0.5, 0.25, 0.8};
  auto probs = torch::full({3, 10}, 0.0);
  for (int64_t i = 0; i < 3; ++i) {
    const double rest = (1.0 - p_true[i]) / 9.0;
    for (int64_t j = 0; j < 10; ++j) probs[i][j] = rest;
    probs[i][y[i].item<int64_t>()] = p_true[i];
  }
  const double expected =
      -(std::log(0.5) + std::log(0.25) + std::log(0.8)) / 3.0;
  CHECK(nll_from_logits(probs.log(), y).item<double>() ==
        doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("training loss decreases over one epoch on a small subset") {
  auto data = make_blobs(100, 1);
  TrainClassifierOptions opts;
  opts.epochs = 1;
  opts.batch_size = 16;
  opts.seed = 3;

  auto subset_loss = [&](BayesClassifier& m) {
    torch::NoGradGuard ng;
    auto logits = m->forward(data.images, /*sample=*/false);
    return (nll_from_logits(logits, data.labels) +
            m->kl() / double(data.size()))
        .item<double>();
  };

  torch::manual_seed(opts.seed);
  BayesClassifier fresh(toy_classifier_spec());
  const double before = subset_loss(fresh);
  auto trained = train_classifier(data, toy_classifier_spec(), opts);
  const double after = subset_loss(trained);
  CHECK(after < before);
}

TEST_CASE("predict_with_certainty contract") {
  auto data = make_blobs(64, 2);
  auto clf = train_toy_classifier(data, 5, 3);

  auto x = data.images.slice(0, 0, 16);
  auto a = predict_with_certainty(clf, x, 10, 99);
  auto b = predict_with_certainty(clf, x, 10, 99);
  CHECK(a.labels.equal(b.labels));
  CHECK(a.certainty.equal(b.certainty));

  // Per-draw softmax rows sum to 1.
  auto sums = a.per_draw_probs.sum(2);
  CHECK((sums - 1.0).abs().max().item<double>() < 1e-5);
  CHECK(a.per_draw_probs.min().item<double>() >= 0.0);

  // Certainty is invariant to permuting the draws.
  auto perm = torch::randperm(10);
  auto permuted = a.per_draw_probs.index_select(0, perm);
  CHECK(class_certainty(permuted, a.labels).equal(a.certainty));

  // Certainty bounds.
  CHECK(a.certainty.min().item<double>() >= 0.0);
  CHECK(a.certainty.max().item<double>() <= 1.0);

  // mc_samples=1: certainty is that single draw's probability of its
  // argmax class.
  auto one = predict_with_certainty(clf, x, 1, 42);
  auto draw_max = std::get<0>(one.per_draw_probs[0].max(1));
  CHECK((one.certainty - draw_max).abs().max().item<double>() < 1e-7);

  // Mean statistic variant stays in range.
  auto m = predict_with_certainty(clf, x, 10, 99, true, CertaintyStat::Mean);
  CHECK(m.certainty.max().item<double>() <= 1.0);
}

TEST_CASE("a perfectly fit training image gets high certainty") {
  auto data = make_blobs(128, 4);
  auto clf = train_toy_classifier(data, 6, 8);
  // Pick an example the mean-weight net nails, then check the sampled
  // certainty.
  torch::Tensor probs;
  {
    torch::NoGradGuard ng;
    probs = torch::softmax(clf->forward(data.images, false), 1);
  }
  auto best = std::get<0>(probs.max(1)).argmax();
  const int64_t i = best.item<int64_t>();
  if (std::get<0>(probs.max(1))[i].item<double>() >= 0.999) {
    auto pred = predict_with_certainty(clf, data.images.slice(0, i, i + 1),
                                       10, 21);
    CHECK(pred.labels[0].item<int64_t>() ==
          data.labels[i].item<int64_t>());
    CHECK(pred.certainty[0].item<double>() >= 0.99);
  }
}

TEST_CASE("classifier_nll input-gradient matches finite differences") {
  auto data = make_blobs(64, 8);
  auto clf = train_toy_classifier(data, 9, 3);
  clf->to(torch::kFloat64);
  clf->freeze();

  auto x = data.images.slice(0, 0, 1).to(torch::kFloat64).clone();
  auto y = data.labels.slice(0, 0, 1);
  const uint64_t seed = 1234;

  auto xg = x.clone().requires_grad_(true);
  auto loss = classifier_nll(clf, xg, y, seed);
  auto grad = torch::autograd::grad({loss}, {xg})[0];

  const double h = 1e-3;
  const int64_t probes[4][2] = {{9, 9}, {9, 10}, {14, 14}, {19, 19}};
  for (const auto& p : probes) {
    auto xp = x.clone();
    auto xm = x.clone();
    xp[0][0][p[0]][p[1]] += h;
    xm[0][0][p[0]][p[1]] -= h;
    torch::NoGradGuard ng;
    const double fp = classifier_nll(clf, xp, y, seed).item<double>();
    const double fm = classifier_nll(clf, xm, y, seed).item<double>();
    const double fd = (fp - fm) / (2.0 * h);
    const double an = grad[0][0][p[0]][p[1]].item<double>();
    const double denom = std::max({std::abs(fd), std::abs(an), 1e-8});
    CHECK(std::abs(fd - an) / denom < 1e-2);
  }
}

TEST_CASE("divergent training is reported") {
  auto data = make_blobs(32, 3);
  TrainClassifierOptions opts;
  opts.epochs = 1;
  opts.batch_size = 8;
  opts.learning_rate = 1e12;  // guaranteed blow-up
  opts.seed = 0;
  CHECK_THROWS_AS(train_classifier(data, toy_classifier_spec(), opts),
                  DivergedTraining);
}
