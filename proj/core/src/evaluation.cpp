#include "gwin/evaluation.hpp"

#include <algorithm>
#include <cmath>

namespace gwin {

double quantile_sorted(const std::vector<double>& v, double q) {
  if (v.empty()) return std::nan("");
  if (v.size() == 1) return v[0];
  const double pos = q * double(v.size() - 1);
  const auto lo = static_cast<size_t>(std::floor(pos));
  const auto hi = static_cast<size_t>(std::ceil(pos));
  const double frac = pos - double(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

CertaintyDeltaStats box_stats(std::vector<double> deltas, double tau) {
  std::sort(deltas.begin(), deltas.end());
  CertaintyDeltaStats s;
  s.tau = tau;
  s.q1 = quantile_sorted(deltas, 0.25);
  s.median = quantile_sorted(deltas, 0.5);
  s.q3 = quantile_sorted(deltas, 0.75);
  const double iqr = s.q3 - s.q1;
  const double lo_bound = s.q1 - 1.5 * iqr;
  const double hi_bound = s.q3 + 1.5 * iqr;
  s.lo_whisker = s.q1;
  s.hi_whisker = s.q3;
  for (double d : deltas) {
    if (d >= lo_bound) {
      s.lo_whisker = d;  // first datum inside the fence
      break;
    }
  }
  for (auto it = deltas.rbegin(); it != deltas.rend(); ++it) {
    if (*it <= hi_bound) {
      s.hi_whisker = *it;
      break;
    }
  }
  for (double d : deltas)
    if (d < lo_bound || d > hi_bound) s.outliers.push_back(d);
  s.deltas = std::move(deltas);
  return s;
}

RunEval evaluate_run(BayesClassifier& clf, const TransformFn& transform,
                     int64_t noise_dim, const LabeledImageSet& test,
                     int64_t mc_samples, uint64_t seed, int64_t batch_size) {
  const int64_t n = test.size();
  std::vector<torch::Tensor> bl, bc, pl, pc, gb, ga;
  for (int64_t start = 0; start < n; start += batch_size) {
    const int64_t end = std::min(n, start + batch_size);
    auto x = test.images.slice(0, start, end);
    auto y = test.labels.slice(0, start, end);
    const uint64_t bseed = seed + uint64_t(start / batch_size) * 7919;

    auto base = predict_with_certainty(clf, x, mc_samples, bseed);
    bl.push_back(base.labels);
    bc.push_back(base.certainty);
    gb.push_back(class_certainty(base.per_draw_probs, y));

    auto z = sample_noise(end - start, noise_dim, bseed ^ 0x6a09e667f3bcc909ULL);
    torch::Tensor xt;
    {
      torch::NoGradGuard no_grad;
      xt = transform(x, z);
    }
    auto post = predict_with_certainty(clf, xt, mc_samples, bseed + 1);
    pl.push_back(post.labels);
    pc.push_back(post.certainty);
    ga.push_back(class_certainty(post.per_draw_probs, y));
  }
  return {torch::cat(bl), torch::cat(bc), torch::cat(pl),
          torch::cat(pc), torch::cat(gb), torch::cat(ga)};
}

RunEval evaluate_run(BayesClassifier& clf, Generator& G,
                     const LabeledImageSet& test, int64_t mc_samples,
                     uint64_t seed, int64_t batch_size) {
  return evaluate_run(
      clf,
      [&G](const torch::Tensor& x, const torch::Tensor& z) {
        return G->forward(x, z);
      },
      G->noise_dim, test, mc_samples, seed, batch_size);
}

namespace {

MeanStd aggregate(const std::vector<double>& vals) {
  MeanStd out;
  const double n = double(vals.size());
  for (double v : vals) out.mean += v;
  out.mean /= n;
  if (vals.size() > 1) {
    double ss = 0.0;
    for (double v : vals) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / (n - 1.0));
  }
  return out;
}

std::optional<MeanStd> aggregate_opt(
    const std::vector<std::optional<double>>& vals) {
  std::vector<double> present;
  for (const auto& v : vals)
    if (v) present.push_back(*v);
  if (present.empty()) return std::nullopt;
  return aggregate(present);
}

}  // namespace

std::vector<ThresholdRow> sweep_from_runs(const std::vector<RunEval>& runs,
                                          const torch::Tensor& labels,
                                          const std::vector<double>& taus) {
  std::vector<ThresholdRow> rows;
  const double n = double(labels.size(0));
  for (double tau : taus) {
    ThresholdRow row;
    row.tau = tau;
    row.n_runs = int64_t(runs.size());
    std::vector<double> pct_rej, acc_base, acc_gwin, acc_delta;
    std::vector<std::optional<double>> rej_base, rej_gwin, rej_delta, err_delta;
    for (const auto& run : runs) {
      auto rejected = run.base_certainty.lt(tau);
      auto base_correct = run.base_labels.eq(labels);
      auto post_correct = run.post_labels.eq(labels);
      const double n_rej = rejected.sum().item<double>();
      pct_rej.push_back(100.0 * n_rej / n);

      const double overall_base =
          100.0 * base_correct.sum().item<double>() / n;
      // Accepted examples keep the baseline prediction in both arms.
      auto gwin_correct =
          torch::where(rejected, post_correct, base_correct);
      const double overall_gwin =
          100.0 * gwin_correct.sum().item<double>() / n;
      acc_base.push_back(overall_base);
      acc_gwin.push_back(overall_gwin);
      acc_delta.push_back(overall_gwin - overall_base);

      if (n_rej > 0) {
        const double rb = 100.0 *
                          base_correct.logical_and(rejected).sum().item<double>() /
                          n_rej;
        const double rg = 100.0 *
                          post_correct.logical_and(rejected).sum().item<double>() /
                          n_rej;
        rej_base.push_back(rb);
        rej_gwin.push_back(rg);
        rej_delta.push_back(rg - rb);
      } else {
        rej_base.push_back(std::nullopt);
        rej_gwin.push_back(std::nullopt);
        rej_delta.push_back(std::nullopt);
      }
      const double err_base = 100.0 - overall_base;
      if (err_base > 0.0)
        err_delta.push_back(100.0 * ((100.0 - overall_gwin) - err_base) /
                            err_base);
      else
        err_delta.push_back(std::nullopt);
    }
    row.pct_reject = aggregate(pct_rej);
    row.overall_acc_baseline = aggregate(acc_base);
    row.overall_acc_gwin = aggregate(acc_gwin);
    row.overall_acc_delta = aggregate(acc_delta);
    row.bnn_acc_rejected = aggregate_opt(rej_base);
    row.bnn_gwin_acc_rejected = aggregate_opt(rej_gwin);
    row.rejected_acc_delta = aggregate_opt(rej_delta);
    row.pct_error_delta = aggregate_opt(err_delta);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ThresholdRow> evaluate_sweep(BayesClassifier& clf, Generator& G,
                                         const LabeledImageSet& test,
                                         const std::vector<double>& taus,
                                         int64_t mc_samples,
                                         const std::vector<uint64_t>& seeds) {
  std::vector<RunEval> runs;
  runs.reserve(seeds.size());
  for (uint64_t seed : seeds)
    runs.push_back(evaluate_run(clf, G, test, mc_samples, seed));
  return sweep_from_runs(runs, test.labels, taus);
}

CertaintyDeltaStats certainty_delta(BayesClassifier& clf,
                                    const TransformFn& transform,
                                    int64_t noise_dim,
                                    const LabeledImageSet& test, double tau,
                                    int64_t mc_samples, uint64_t seed) {
  auto run = evaluate_run(clf, transform, noise_dim, test, mc_samples, seed);
  auto rejected = run.base_certainty.lt(tau);
  auto delta = (run.gt_cert_after - run.gt_cert_before)
                   .masked_select(rejected)
                   .to(torch::kFloat64);
  if (delta.size(0) == 0)
    throw EmptyRejectedSubset("no rejected examples at tau=" +
                              std::to_string(tau));
  std::vector<double> deltas(delta.data_ptr<double>(),
                             delta.data_ptr<double>() + delta.size(0));
  return box_stats(std::move(deltas), tau);
}

CertaintyDeltaStats certainty_delta(BayesClassifier& clf, Generator& G,
                                    const LabeledImageSet& test, double tau,
                                    int64_t mc_samples, uint64_t seed) {
  return certainty_delta(
      clf,
      [&G](const torch::Tensor& x, const torch::Tensor& z) {
        return G->forward(x, z);
      },
      G->noise_dim, test, tau, mc_samples, seed);
}

}  // namespace gwin
