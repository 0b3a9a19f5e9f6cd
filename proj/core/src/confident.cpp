#include "gwin/confident.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace gwin {

torch::Tensor ConfidentSubset::index_tensor() const {
  return torch::tensor(member_indices, torch::kInt64);
}

namespace {

std::vector<int64_t> membership_pass(const LabeledImageSet& train,
                                     BayesClassifier& clf, double tau_star,
                                     int64_t mc_samples, uint64_t seed,
                                     int64_t batch_size) {
  std::vector<int64_t> members;
  const int64_t n = train.size();
  // A single generator threads through the whole pass, so membership is a
  // function of (data, model, seed, batch size) and nothing else.
  for (int64_t start = 0; start < n; start += batch_size) {
    const int64_t end = std::min(n, start + batch_size);
    auto x = train.images.slice(0, start, end);
    auto pred = predict_with_certainty(clf, x, mc_samples,
                                       seed + uint64_t(start / batch_size),
                                       /*keep_draws=*/false);
    auto correct = pred.labels.eq(train.labels.slice(0, start, end));
    auto confident = pred.certainty.ge(tau_star);
    auto keep = correct.logical_and(confident);
    const auto* keep_ptr = keep.data_ptr<bool>();
    for (int64_t i = 0; i < end - start; ++i)
      if (keep_ptr[i]) members.push_back(start + i);
  }
  return members;
}

}  // namespace

ConfidentSubset build_confident_subset(const LabeledImageSet& train,
                                       BayesClassifier& clf, double tau_star,
                                       int64_t mc_samples, uint64_t seed,
                                       int64_t batch_size) {
  if (!clf->trained)
    throw UntrainedClassifier("confident subset needs a trained classifier");
  ConfidentSubset subset;
  subset.tau_star = tau_star;
  subset.mc_samples = mc_samples;
  subset.sampling_seed = seed;
  subset.batch_size = batch_size;
  subset.classifier_hash = clf->checkpoint_hash;
  subset.base_name = train.name;
  subset.member_indices =
      membership_pass(train, clf, tau_star, mc_samples, seed, batch_size);
  return subset;
}

bool verify_confident_subset(const ConfidentSubset& subset,
                             const LabeledImageSet& train,
                             BayesClassifier& clf) {
  auto replay = membership_pass(train, clf, subset.tau_star,
                                subset.mc_samples, subset.sampling_seed,
                                subset.batch_size);
  return replay == subset.member_indices;
}

void save_confident_subset(const ConfidentSubset& subset,
                           const std::filesystem::path& path) {
  nlohmann::json j;
  j["tau_star"] = subset.tau_star;
  j["mc_samples"] = subset.mc_samples;
  j["sampling_seed"] = subset.sampling_seed;
  j["batch_size"] = subset.batch_size;
  j["classifier_hash"] = subset.classifier_hash;
  j["base_name"] = subset.base_name;
  j["member_indices"] = subset.member_indices;
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

ConfidentSubset load_confident_subset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open subset file " + path.string());
  nlohmann::json j;
  in >> j;
  ConfidentSubset subset;
  subset.tau_star = j.at("tau_star").get<double>();
  subset.mc_samples = j.at("mc_samples").get<int64_t>();
  subset.sampling_seed = j.at("sampling_seed").get<uint64_t>();
  subset.batch_size = j.at("batch_size").get<int64_t>();
  subset.classifier_hash = j.at("classifier_hash").get<std::string>();
  subset.base_name = j.at("base_name").get<std::string>();
  subset.member_indices = j.at("member_indices").get<std::vector<int64_t>>();
  return subset;
}

}  // namespace gwin
