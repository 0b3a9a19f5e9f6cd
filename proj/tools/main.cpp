// Command-line front end for the gwin library: classifier training,
// confident-subset construction, adversarial training, inference, and the
// threshold-sweep evaluation report.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "gwin/gwin.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace gwin;

namespace {

LabeledImageSet load_normalized(const fs::path& images, const fs::path& labels,
                                const std::string& name) {
  return normalize(load_idx(images, labels, name));
}

BayesClassifier load_classifier(const fs::path& ckpt) {
  BayesClassifier clf(spec_by_name(checkpoint_arch(ckpt)));
  clf->checkpoint_hash = load_checkpoint(*clf, ckpt);
  clf->trained = true;
  clf->eval();
  return clf;
}

std::vector<double> parse_taus(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GWIN: certainty-thresholded classification with a "
               "conditional generative transform for rejected inputs"};
  app.require_subcommand(1);
  torch::set_num_threads(std::max(1u, std::thread::hardware_concurrency()));

  // ---- train-classifier ------------------------------------------------
  auto* tc = app.add_subcommand("train-classifier",
                                "Train a Bayesian classifier on an IDX pair");
  fs::path tc_images, tc_labels, tc_out = "classifier.pt";
  std::string tc_arch = "lenet5_bnn";
  int64_t tc_epochs = 30, tc_batch = 128;
  double tc_lr = 1e-3;
  uint64_t tc_seed = 0;
  tc->add_option("--train-images", tc_images, "IDX image file")->required();
  tc->add_option("--train-labels", tc_labels, "IDX label file")->required();
  tc->add_option("--arch", tc_arch, "lenet5_bnn or improved_bnn");
  tc->add_option("--epochs", tc_epochs);
  tc->add_option("--lr", tc_lr);
  tc->add_option("--batch-size", tc_batch);
  tc->add_option("--seed", tc_seed);
  tc->add_option("--out", tc_out, "checkpoint path");

  // ---- build-confident ---------------------------------------------------
  auto* bc = app.add_subcommand(
      "build-confident",
      "Select training examples the classifier labels correctly with "
      "certainty >= tau*");
  fs::path bc_images, bc_labels, bc_clf, bc_out = "confident.json";
  double bc_tau = 0.95;
  int64_t bc_mc = 10;
  uint64_t bc_seed = 2;
  bc->add_option("--train-images", bc_images)->required();
  bc->add_option("--train-labels", bc_labels)->required();
  bc->add_option("--classifier", bc_clf, "classifier checkpoint")->required();
  bc->add_option("--tau-star", bc_tau);
  bc->add_option("--mc-samples", bc_mc);
  bc->add_option("--seed", bc_seed);
  bc->add_option("--out", bc_out, "subset JSON path");

  // ---- train-gwin -------------------------------------------------------
  auto* tg = app.add_subcommand(
      "train-gwin", "Adversarially train the generator/critic pair");
  fs::path tg_images, tg_labels, tg_clf, tg_subset, tg_out = "gwin_out";
  GwinTrainConfig tg_cfg;
  tg->add_option("--train-images", tg_images)->required();
  tg->add_option("--train-labels", tg_labels)->required();
  tg->add_option("--classifier", tg_clf)->required();
  tg->add_option("--subset", tg_subset, "confident subset JSON")->required();
  tg->add_option("--iterations", tg_cfg.generator_iterations,
                 "generator iterations");
  tg->add_flag("--count-total-updates", tg_cfg.count_total_updates,
               "budget counts critic updates too");
  tg->add_option("--batch-size", tg_cfg.batch_size);
  tg->add_option("--lambda-gp", tg_cfg.lambda_gp);
  tg->add_option("--lambda-loss", tg_cfg.lambda_loss);
  tg->add_option("--n-critic", tg_cfg.n_critic);
  tg->add_option("--lr", tg_cfg.adam_lr);
  tg->add_option("--noise-dim", tg_cfg.noise_dim);
  tg->add_option("--generator-channels", tg_cfg.generator_channels);
  tg->add_option("--critic-channels", tg_cfg.critic_channels);
  tg->add_option("--seed", tg_cfg.seed);
  tg->add_option("--checkpoint-every", tg_cfg.checkpoint_every);
  tg->add_option("--log-every", tg_cfg.log_every);
  tg->add_option("--out-dir", tg_out, "checkpoints and metrics directory");

  // ---- infer --------------------------------------------------------------
  auto* in = app.add_subcommand(
      "infer", "Classify-reject-transform-relabel; JSON line per input");
  fs::path in_images, in_labels, in_clf, in_gen;
  double in_tau = 0.95;
  int64_t in_mc = 10, in_noise = 100, in_gchan = 256;
  uint64_t in_seed = 0;
  in->add_option("--images", in_images, "IDX image file")->required();
  in->add_option("--labels", in_labels, "optional IDX labels (adds accuracy)");
  in->add_option("--classifier", in_clf)->required();
  in->add_option("--generator", in_gen, "generator checkpoint")->required();
  in->add_option("--tau", in_tau);
  in->add_option("--mc-samples", in_mc);
  in->add_option("--noise-dim", in_noise);
  in->add_option("--generator-channels", in_gchan);
  in->add_option("--seed", in_seed);

  // ---- evaluate --------------------------------------------------------
  auto* ev = app.add_subcommand(
      "evaluate", "Threshold sweep: tables, JSONL, and SVG plots");
  fs::path ev_images, ev_labels, ev_clf, ev_gen, ev_out = "eval_out";
  std::string ev_taus = "0.1,0.3,0.5,0.7,0.8,0.9,0.95,0.99";
  std::string ev_dataset = "digits";
  int64_t ev_mc = 10, ev_runs = 10, ev_noise = 100, ev_gchan = 256;
  uint64_t ev_seed0 = 10;
  ev->add_option("--test-images", ev_images)->required();
  ev->add_option("--test-labels", ev_labels)->required();
  ev->add_option("--classifier", ev_clf)->required();
  ev->add_option("--generator", ev_gen)->required();
  ev->add_option("--dataset", ev_dataset, "label recorded in the report");
  ev->add_option("--taus", ev_taus, "comma-separated thresholds");
  ev->add_option("--mc-samples", ev_mc);
  ev->add_option("--runs", ev_runs, "stochastic inference repetitions");
  ev->add_option("--seed", ev_seed0, "first run seed (run i uses seed+i)");
  ev->add_option("--noise-dim", ev_noise);
  ev->add_option("--generator-channels", ev_gchan);
  ev->add_option("--out-dir", ev_out);

  // ---- flops ------------------------------------------------------------
  auto* fl = app.add_subcommand("flops",
                                "Analytic per-forward-pass FLOP counts");
  std::string fl_arch = "all";
  fl->add_option("--arch", fl_arch,
                 "lenet5_bnn, improved_bnn, generator, critic, or all");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*tc) {
      auto train = load_normalized(tc_images, tc_labels, "train");
      TrainClassifierOptions opts;
      opts.epochs = tc_epochs;
      opts.learning_rate = tc_lr;
      opts.batch_size = tc_batch;
      opts.seed = tc_seed;
      opts.on_epoch = [&](int64_t e, double loss) {
        std::cout << "epoch " << (e + 1) << "/" << tc_epochs << " loss "
                  << loss << std::endl;
      };
      auto clf = train_classifier(train, spec_by_name(tc_arch), opts);
      auto hash = save_checkpoint(*clf, tc_out, tc_arch);
      std::cout << "saved " << tc_out << " (" << hash << ")\n";
    } else if (*bc) {
      auto train = load_normalized(bc_images, bc_labels, "train");
      auto clf = load_classifier(bc_clf);
      auto subset = build_confident_subset(train, clf, bc_tau, bc_mc, bc_seed);
      save_confident_subset(subset, bc_out);
      std::cout << subset.size() << "/" << train.size()
                << " examples kept at tau*=" << bc_tau << "; wrote " << bc_out
                << "\n";
    } else if (*tg) {
      auto train = load_normalized(tg_images, tg_labels, "train");
      auto clf = load_classifier(tg_clf);
      auto subset = load_confident_subset(tg_subset);
      tg_cfg.tau_star = subset.tau_star;
      tg_cfg.out_dir = tg_out;
      fs::create_directories(tg_out);
      GwinTrainHooks hooks;
      hooks.on_metrics = [](const GwinMetrics& m) {
        std::cout << "iter " << m.iteration << " critic " << m.critic_loss
                  << " gen " << m.gen_loss << " gp " << m.gp_term << " ("
                  << m.wall_time << "s)" << std::endl;
      };
      auto [G, D] = train_gwin(subset, train, clf, tg_cfg, hooks);
      save_checkpoint(*G, tg_out / "generator.pt", "generator");
      save_checkpoint(*D, tg_out / "critic.pt", "critic");
      std::cout << "wrote " << (tg_out / "generator.pt") << " and "
                << (tg_out / "critic.pt") << "\n";
    } else if (*in) {
      // Labels are optional and only feed the accuracy summary.
      auto set = normalize(in_labels.empty()
                               ? load_idx_images(in_images, "infer")
                               : load_idx(in_images, in_labels, "infer"));
      auto clf = load_classifier(in_clf);
      Generator G(in_noise, in_gchan);
      load_checkpoint(*G, in_gen);
      auto results = infer_batch(clf, G, set.images, in_tau, in_mc, in_seed);
      int64_t correct = 0;
      for (size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        json line = {{"index", i},
                     {"final_label", r.final_label},
                     {"path", r.path == InferencePath::Direct ? "direct"
                                                              : "transformed"},
                     {"initial_label", r.initial_label},
                     {"initial_certainty", r.initial_certainty},
                     {"tau", r.tau}};
        if (r.post_label) line["post_label"] = *r.post_label;
        if (r.post_certainty) line["post_certainty"] = *r.post_certainty;
        std::cout << line.dump() << "\n";
        if (!in_labels.empty() &&
            r.final_label == set.labels[int64_t(i)].item<int64_t>())
          ++correct;
      }
      if (!in_labels.empty())
        std::cerr << "accuracy " << (100.0 * correct / double(results.size()))
                  << "% over " << results.size() << " inputs\n";
    } else if (*ev) {
      auto test = load_normalized(ev_images, ev_labels, ev_dataset);
      auto clf = load_classifier(ev_clf);
      Generator G(ev_noise, ev_gchan);
      load_checkpoint(*G, ev_gen);
      std::vector<uint64_t> seeds;
      for (int64_t i = 0; i < ev_runs; ++i) seeds.push_back(ev_seed0 + i);
      auto taus = parse_taus(ev_taus);
      auto rows = evaluate_sweep(clf, G, test, taus, ev_mc, seeds);
      fs::create_directories(ev_out);
      write_rows_jsonl(rows, ev_dataset, ev_out / "sweep.jsonl");
      write_table_csv(rows, ev_out / "sweep.csv");
      write_accuracy_svg(rows, ev_out / "accuracy.svg");
      std::vector<CertaintyDeltaStats> boxes;
      for (double tau : taus) {
        try {
          boxes.push_back(certainty_delta(clf, G, test, tau, ev_mc, seeds[0]));
        } catch (const EmptyRejectedSubset&) {
          // nothing rejected at this tau; no box to draw
        }
      }
      if (!boxes.empty()) write_boxplot_svg(boxes, ev_out / "certainty.svg");
      std::cout << format_table_text(rows);
      std::cout << "report written to " << ev_out << "\n";
    } else if (*fl) {
      std::vector<ArchitectureSpec> specs;
      if (fl_arch == "all")
        specs = {lenet5_bnn_spec(), improved_bnn_spec(), generator_spec(),
                 critic_spec()};
      else
        specs = {spec_by_name(fl_arch)};
      for (const auto& s : specs)
        std::cout << s.name << ": " << estimate_flops(s)
                  << " FLOPs per forward pass\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
