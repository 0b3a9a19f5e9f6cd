#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gwin/classifier.hpp"
#include "gwin/dataset.hpp"
#include "gwin/generator.hpp"

namespace gwin {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n-1); 0 when n==1
};

/// One row of the threshold-sweep table. Percentages throughout.
/// Rejected-subset columns are absent when no run rejected anything at
/// this tau; pct_error_delta is absent when the baseline error is zero.
struct ThresholdRow {
  double tau;
  MeanStd pct_reject;
  std::optional<MeanStd> bnn_acc_rejected;
  std::optional<MeanStd> bnn_gwin_acc_rejected;
  std::optional<MeanStd> rejected_acc_delta;
  MeanStd overall_acc_baseline;
  MeanStd overall_acc_gwin;
  MeanStd overall_acc_delta;
  std::optional<MeanStd> pct_error_delta;
  int64_t n_runs = 0;
};

/// Box-plot statistics of the per-example change in ground-truth-class
/// certainty across the rejected subset.
struct CertaintyDeltaStats {
  double tau;
  double q1, median, q3;
  double lo_whisker, hi_whisker;  // most extreme data within 1.5*IQR
  std::vector<double> outliers;
  std::vector<double> deltas;  // raw values, ascending
};

/// Linear-interpolation quantile of ascending values, q in [0,1].
double quantile_sorted(const std::vector<double>& ascending, double q);

CertaintyDeltaStats box_stats(std::vector<double> deltas, double tau);

/// Image-to-image transform; the default wraps a Generator so tests can
/// inject doubles (e.g. the identity).
using TransformFn =
    std::function<torch::Tensor(const torch::Tensor&, const torch::Tensor&)>;

/// Per-run raw material for the sweep: baseline and transformed-arm
/// predictions for every test example, plus ground-truth-class
/// certainties before/after transformation.
struct RunEval {
  torch::Tensor base_labels, base_certainty;
  torch::Tensor post_labels, post_certainty;
  torch::Tensor gt_cert_before, gt_cert_after;
};

RunEval evaluate_run(BayesClassifier& clf, const TransformFn& transform,
                     int64_t noise_dim, const LabeledImageSet& test,
                     int64_t mc_samples, uint64_t seed,
                     int64_t batch_size = 512);
RunEval evaluate_run(BayesClassifier& clf, Generator& G,
                     const LabeledImageSet& test, int64_t mc_samples,
                     uint64_t seed, int64_t batch_size = 512);

/// Rows for each tau, aggregated (mean +- sample std) over per-seed runs
/// against fixed checkpoints.
std::vector<ThresholdRow> sweep_from_runs(const std::vector<RunEval>& runs,
                                          const torch::Tensor& labels,
                                          const std::vector<double>& taus);
std::vector<ThresholdRow> evaluate_sweep(BayesClassifier& clf, Generator& G,
                                         const LabeledImageSet& test,
                                         const std::vector<double>& taus,
                                         int64_t mc_samples,
                                         const std::vector<uint64_t>& seeds);

/// Fig-4-style statistics at one tau. Throws EmptyRejectedSubset.
CertaintyDeltaStats certainty_delta(BayesClassifier& clf,
                                    const TransformFn& transform,
                                    int64_t noise_dim,
                                    const LabeledImageSet& test, double tau,
                                    int64_t mc_samples, uint64_t seed);
CertaintyDeltaStats certainty_delta(BayesClassifier& clf, Generator& G,
                                    const LabeledImageSet& test, double tau,
                                    int64_t mc_samples, uint64_t seed);

}  // namespace gwin
