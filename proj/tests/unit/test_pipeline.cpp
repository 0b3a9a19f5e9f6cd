#include "doctest.h"
#include "gwin/gwin.hpp"
#include "support/synthetic.hpp"

using namespace gwin;
using namespace gwin::testsupport;

namespace {

struct Fixture {
  LabeledImageSet data = make_blobs(96, 11);
  BayesClassifier clf = train_toy_classifier(data, 3, 5);
  Generator G{8, 16};
  Fixture() { torch::manual_seed(5); }
};

}  // namespace

TEST_CASE("tau=0 sends everything down the direct path") {
  Fixture f;
  auto results = infer_batch(f.clf, f.G, f.data.images.slice(0, 0, 12), 0.0,
                             5, 7);
  for (const auto& r : results) {
    CHECK(r.path == InferencePath::Direct);
    CHECK(r.final_label == r.initial_label);
    CHECK_FALSE(r.post_label.has_value());
    CHECK_FALSE(r.post_certainty.has_value());
  }
}

TEST_CASE("tau=1 transforms everything short of full certainty") {
  Fixture f;
  auto results = infer_batch(f.clf, f.G, f.data.images.slice(0, 0, 12), 1.0,
                             5, 7);
  for (const auto& r : results) {
    if (r.initial_certainty < 1.0) {
      CHECK(r.path == InferencePath::Transformed);
      REQUIRE(r.post_label.has_value());
      CHECK(r.final_label == *r.post_label);
      REQUIRE(r.post_certainty.has_value());
      CHECK(*r.post_certainty >= 0.0);
      CHECK(*r.post_certainty <= 1.0);
    }
  }
}

TEST_CASE("path agrees with the threshold rule") {
  Fixture f;
  for (double tau : {0.3, 0.6, 0.9}) {
    auto results =
        infer_batch(f.clf, f.G, f.data.images.slice(0, 0, 16), tau, 5, 3);
    for (const auto& r : results) {
      const bool accepted = reject(r.initial_certainty, r.initial_label, tau)
                                .accepted;
      CHECK((r.path == InferencePath::Direct) == accepted);
      CHECK(r.tau == tau);
    }
  }
}

TEST_CASE("inference is deterministic under a fixed seed") {
  Fixture f;
  auto x = f.data.images.slice(0, 0, 10);
  auto a = infer_batch(f.clf, f.G, x, 0.8, 5, 99);
  auto b = infer_batch(f.clf, f.G, x, 0.8, 5, 99);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].final_label == b[i].final_label);
    CHECK(a[i].path == b[i].path);
    CHECK(a[i].initial_certainty == b[i].initial_certainty);
    CHECK(a[i].post_certainty == b[i].post_certainty);
  }
}

TEST_CASE("a rejection costs one generator pass and one extra MC pass") {
  Fixture f;
  const int64_t mc = 5;
  auto x = f.data.images.slice(0, 0, 20);

  f.G->forward_passes = 0;
  f.clf->sampling_passes = 0;
  auto results = infer_batch(f.clf, f.G, x, 0.9, mc, 17);

  int64_t rejected = 0;
  for (const auto& r : results)
    if (r.path == InferencePath::Transformed) ++rejected;

  CHECK(f.G->forward_passes == rejected);
  // mc passes per input, plus mc more for each rejected one.
  CHECK(f.clf->sampling_passes == mc * (int64_t(results.size()) + rejected));
}

TEST_CASE("flops: dense layer oracle") {
  // A single 100->10 dense layer without bias costs exactly
  // 2 * 100 * 10 = 2000 FLOPs.
  ArchitectureSpec spec;
  spec.name = "probe";
  spec.input = {100, 0, 0};
  spec.layers.push_back(LayerSpec{.kind = LayerKind::Dense,
                                  .filters = 10,
                                  .act = Activation::None,
                                  .bias = false});
  CHECK(estimate_flops(spec) == 2000);

  // With bias: one add per output.
  spec.layers[0].bias = true;
  CHECK(estimate_flops(spec) == 2010);
}

TEST_CASE("flops: published per-network figures within 10%") {
  const auto close = [](int64_t got, int64_t want) {
    return std::abs(double(got) - double(want)) / double(want) < 0.10;
  };
  CHECK(close(estimate_flops(generator_spec()), 54179350));
  CHECK(close(estimate_flops(lenet5_bnn_spec()), 15431592));
  CHECK(estimate_flops(improved_bnn_spec()) > 0);
  CHECK(estimate_flops(critic_spec()) > 0);
}

TEST_CASE("flops scale with monte carlo draws and rejection") {
  // Per-observation cost model: S classifier passes, plus for a rejected
  // observation one generator pass and S more classifier passes.
  const int64_t c = estimate_flops(lenet5_bnn_spec());
  const int64_t g = estimate_flops(generator_spec());
  const int64_t S = 10;
  const int64_t direct = S * c;
  const int64_t transformed = 2 * S * c + g;
  CHECK(transformed > direct);
  CHECK(transformed - direct == S * c + g);
}
