// Command-line front end for the echograph pipeline: synthetic data
// generation, ingestion, embedding training, classification experiments,
// variance analysis and the textual baseline. One subcommand per stage;
// every run writes a manifest.txt with its resolved configuration.
//
// Exit codes: 0 success, 1 usage error (bad flags, missing inputs,
// refusal to overwrite), 2 data error (unparseable or inconsistent files).

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "echograph/pipeline.hpp"

namespace {

using namespace echograph;

struct GlobalOpts {
  std::uint64_t seed = 1;
  int threads = 1;
  bool force = false;
};

void print_metrics(const std::vector<ExperimentCell>& cells) {
  std::printf("%-10s %-6s %-9s %-9s %-9s %-9s %-9s\n", "fraction", "seed",
              "accuracy", "precision", "recall", "f1", "auc");
  for (const auto& c : cells) {
    std::printf("%-10g %-6llu %-9.4f %-9.4f %-9.4f %-9.4f %-9.4f\n", c.fraction,
                static_cast<unsigned long long>(c.seed), c.metrics.accuracy,
                c.metrics.macro_precision, c.metrics.macro_recall,
                c.metrics.macro_f1, c.metrics.auc);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "echograph: unsupervised social-graph embeddings for fake-news "
      "detection (synthetic benchmark + full training/evaluation pipeline)"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file supplying defaults");

  GlobalOpts global;
  app.add_option("--seed", global.seed, "global RNG seed")->capture_default_str();
  app.add_option("--threads", global.threads, "worker threads for walk generation")
      ->capture_default_str();
  app.add_flag("--force", global.force, "overwrite existing experiment output");

  // ---- synth ----------------------------------------------------------
  auto* synth = app.add_subcommand(
      "synth", "generate a synthetic echo-chamber dataset with ground truth");
  SyntheticSpec spec;
  std::string synth_out;
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--n-users", spec.n_users)->capture_default_str();
  synth->add_option("--n-communities", spec.n_communities)->capture_default_str();
  synth->add_option("--p-in", spec.p_in, "intra-community follow probability")
      ->capture_default_str();
  synth->add_option("--p-out", spec.p_out, "cross-community follow probability")
      ->capture_default_str();
  synth->add_option("--reciprocity", spec.reciprocity,
                    "fraction of edge mass planted as mutual pairs")
      ->capture_default_str();
  synth->add_option("--cross-oneway", spec.cross_extra_oneway_p,
                    "extra strictly one-directional cross-community follows")
      ->capture_default_str();
  synth->add_option("--n-articles", spec.n_articles)->capture_default_str();
  synth->add_option("--fake-fraction", spec.fake_fraction)->capture_default_str();
  synth->add_option("--homophily", spec.homophily,
                    "probability a fake engager comes from community 0")
      ->capture_default_str();
  synth->add_option("--engagers-min", spec.engagers_min)->capture_default_str();
  synth->add_option("--engagers-max", spec.engagers_max)->capture_default_str();
  synth->add_option("--text-noise", spec.text_noise)->capture_default_str();
  synth->add_option("--text-len-min", spec.text_len_min)->capture_default_str();
  synth->add_option("--text-len-max", spec.text_len_max)->capture_default_str();
  synth->add_option("--tweets-per-article", spec.tweets_per_article)
      ->capture_default_str();
  synth->add_option("--tweet-len", spec.tweet_len)->capture_default_str();
  synth->add_option("--common-vocab", spec.common_vocab)->capture_default_str();
  synth->add_option("--community-vocab", spec.community_vocab)
      ->capture_default_str();

  // ---- ingest --------------------------------------------------------
  auto* ingest = app.add_subcommand(
      "ingest", "build the pruned follower/friendship dataset from raw files");
  IngestRunConfig icfg;
  ingest->add_option("--edges", icfg.edges_path, "edge list (src<TAB>dst)")
      ->required()
      ->check(CLI::ExistingFile);
  ingest->add_option("--articles", icfg.articles_path, "article JSON lines")
      ->required()
      ->check(CLI::ExistingFile);
  ingest->add_option("--out", icfg.out_dir, "output directory")->required();
  ingest->add_option("--min-edges", icfg.min_edges,
                     "prune users with fewer total edges")
      ->capture_default_str();

  // ---- embed ----------------------------------------------------------
  auto* embed = app.add_subcommand("embed", "train node embeddings");
  std::string embed_data, embed_method = "deepwalk", embed_network = "fr";
  std::string feature_mode = "trainable_lookup";
  EmbedRunConfig ecfg;
  int embed_epochs = -1;
  embed->add_option("--data", embed_data, "ingest output directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  embed->add_option("--method", embed_method, "deepwalk|sage|cgcn")
      ->capture_default_str();
  embed->add_option("--network", embed_network, "fo (followers) | fr (friends)")
      ->capture_default_str();
  embed->add_option("--out", ecfg.out_dir, "output directory")->required();
  embed->add_option("--walks-per-node", ecfg.walk.walks_per_node)
      ->capture_default_str();
  embed->add_option("--walk-len", ecfg.walk.max_len)->capture_default_str();
  embed->add_option("--epochs", embed_epochs,
                    "training epochs (default: 5 deepwalk, 30 sage, 1000 cgcn)");
  embed->add_option("--dim", ecfg.sg.dim, "deepwalk dimension")
      ->capture_default_str();
  embed->add_option("--window", ecfg.sg.window, "context window")
      ->capture_default_str();
  embed->add_option("--negatives", ecfg.sg.negatives_per_pair)
      ->capture_default_str();
  embed->add_option("--lr", ecfg.sg.lr_initial)->capture_default_str();
  embed->add_option("--lr-final", ecfg.sg.lr_final)->capture_default_str();
  embed->add_option("--hidden-dim", ecfg.gnn.hidden_dim)->capture_default_str();
  embed->add_option("--out-dim", ecfg.gnn.out_dim)->capture_default_str();
  embed->add_option("--gnn-lr", ecfg.gnn.learning_rate)->capture_default_str();
  embed->add_option("--fanout1", ecfg.gnn.neighbor_samples[0])
      ->capture_default_str();
  embed->add_option("--fanout2", ecfg.gnn.neighbor_samples[1])
      ->capture_default_str();
  embed->add_option("--partitions", ecfg.gnn.n_partitions)->capture_default_str();
  embed->add_option("--partitions-per-batch", ecfg.gnn.partitions_per_batch)
      ->capture_default_str();
  embed->add_option("--pairs-per-epoch", ecfg.gnn.pairs_per_epoch,
                    "sage positive pairs per epoch (0 = 10 * n_nodes)")
      ->capture_default_str();
  embed->add_option("--batch-pairs", ecfg.gnn.batch_pairs)->capture_default_str();
  embed->add_option("--pairs-per-partition", ecfg.gnn.pairs_per_partition)
      ->capture_default_str();
  embed->add_option("--feature-mode", feature_mode,
                    "trainable_lookup|degree_features")
      ->capture_default_str();
  embed->add_option("--feature-dim", ecfg.gnn.feature_dim)->capture_default_str();
  embed->add_flag("--binary", ecfg.binary, "write binary embeddings");
  embed->add_flag("--dump-walks", ecfg.dump_walks, "also write walks.txt");

  // ---- experiment ------------------------------------------------------
  auto* experiment = app.add_subcommand(
      "experiment", "split/train/evaluate the article classifier");
  std::string exp_data;
  ExperimentRunConfig xcfg;
  experiment->add_option("--data", exp_data, "ingest output directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  experiment->add_option("--embedding", xcfg.embedding_path, "embedding file");
  experiment->add_option("--fractions", xcfg.fractions, "train fractions")
      ->capture_default_str();
  experiment->add_option("--split-seeds", xcfg.seeds, "split seeds")
      ->capture_default_str();
  experiment->add_option("--classifier-epochs", xcfg.classifier.epochs)
      ->capture_default_str();
  experiment->add_option("--classifier-lr", xcfg.classifier.lr_initial)
      ->capture_default_str();
  experiment->add_option("--classifier-lr-final", xcfg.classifier.lr_final)
      ->capture_default_str();
  experiment->add_flag("--shuffle-labels", xcfg.shuffle_labels,
                       "no-signal control: permute labels before splitting");
  experiment->add_option("--compare", xcfg.compare_files,
                         "prediction CSVs for pairwise McNemar tests");
  experiment->add_option("--out", xcfg.out_dir, "output directory")->required();

  // ---- analyze ---------------------------------------------------------
  auto* analyze = app.add_subcommand(
      "analyze", "PCA projection and cumulative explained variation");
  std::string ana_data, ana_a, ana_b;
  AnalyzeRunConfig acfg;
  analyze->add_option("--data", ana_data, "ingest output directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  analyze->add_option("--embedding", acfg.embedding_path, "embedding file")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("--k", acfg.k, "components (capped at dim)")
      ->capture_default_str();
  analyze->add_option("--article-a", ana_a, "first article id (pair mode)");
  analyze->add_option("--article-b", ana_b, "second article id (pair mode)");
  analyze->add_option("--out", acfg.out_dir, "output directory")->required();

  // ---- baseline --------------------------------------------------------
  auto* baseline =
      app.add_subcommand("baseline", "TF.IDF textual baseline (SVM or logreg)");
  std::string base_data, base_classifier = "svm";
  BaselineRunConfig bcfg;
  baseline->add_option("--data", base_data, "ingest output directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  baseline->add_option("--classifier", base_classifier, "svm|logreg")
      ->capture_default_str();
  baseline->add_option("--fractions", bcfg.fractions)->capture_default_str();
  baseline->add_option("--split-seeds", bcfg.seeds)->capture_default_str();
  baseline->add_option("--C", bcfg.svm.C)->capture_default_str();
  baseline->add_option("--gamma", bcfg.svm.gamma)->capture_default_str();
  baseline->add_option("--tol", bcfg.svm.tol)->capture_default_str();
  baseline->add_option("--max-vocab", bcfg.max_vocab)->capture_default_str();
  baseline->add_flag("--shuffle-labels", bcfg.shuffle_labels);
  baseline->add_option("--out", bcfg.out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Collapse CLI11's fine-grained exit codes onto the documented contract:
    // 0 for --help style exits, 1 for every usage error.
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*synth) {
      spec.seed = global.seed;
      SynthRunConfig cfg{spec, synth_out};
      const SynthRunResult r = run_synth(cfg);
      std::cout << "wrote " << r.edges_path << " ("
                << r.data.followers.n_edges() << " edges), "
                << r.articles_path << " (" << r.data.articles.size()
                << " articles), " << r.communities_path << "\n";
    } else if (*ingest) {
      const IngestRunResult r = run_ingest(icfg);
      std::cout << "users kept: " << r.dataset.followers.n_nodes()
                << ", follow edges: " << r.dataset.followers.n_edges()
                << ", friend pairs: " << r.dataset.friendship.n_edges() / 2
                << ", articles: " << r.dataset.articles.size() << "\n"
                << "dataset written to " << icfg.out_dir << "\n";
    } else if (*embed) {
      try {
        ecfg.method = embed_method_from_string(embed_method);
        ecfg.network = network_from_string(embed_network);
        if (feature_mode == "trainable_lookup") {
          ecfg.gnn.feature_mode = FeatureMode::trainable_lookup;
        } else if (feature_mode == "degree_features") {
          ecfg.gnn.feature_mode = FeatureMode::degree_features;
        } else {
          throw std::invalid_argument("unknown feature mode '" + feature_mode + "'");
        }
      } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
      }
      ecfg.walk.seed = global.seed;
      ecfg.sg.seed = global.seed;
      ecfg.gnn.seed = global.seed;
      ecfg.threads = global.threads;
      // --window/--negatives describe the pair objective for every method
      // (their skip-gram and GNN defaults coincide, so the copy is lossless).
      ecfg.gnn.window = ecfg.sg.window;
      ecfg.gnn.negatives_per_pair = ecfg.sg.negatives_per_pair;
      if (embed_epochs >= 0) {
        ecfg.sg.epochs = embed_epochs;
        ecfg.gnn.epochs = embed_epochs;
      } else if (ecfg.method == EmbedMethod::cgcn) {
        ecfg.gnn.epochs = 1000;
      }
      const Dataset ds = load_dataset(embed_data);
      const EmbedRunResult r = run_embed(ds, ecfg);
      std::cout << "embedding (" << r.embeddings.n_rows << " x "
                << r.embeddings.dim << ") written to " << r.embedding_path
                << "\n";
      if (!r.epoch_loss.empty()) {
        std::cout << "loss first epoch " << r.epoch_loss.front()
                  << ", last epoch " << r.epoch_loss.back() << "\n";
      }
    } else if (*experiment) {
      if (xcfg.embedding_path.empty() && xcfg.compare_files.size() < 2) {
        std::cerr << "usage error: experiment needs --embedding or at least "
                     "two --compare files\n";
        return 1;
      }
      xcfg.classifier.seed = global.seed;
      xcfg.shuffle_seed = global.seed;
      xcfg.force = global.force;
      const Dataset ds = load_dataset(exp_data);
      const ExperimentRunResult r = run_experiment(ds, xcfg);
      if (!r.cells.empty()) {
        print_metrics(r.cells);
        std::cout << "mean test accuracy " << r.mean_test_accuracy << "\n";
      }
      for (const auto& row : r.comparisons) {
        std::cout << "mcnemar " << row.file_a << " vs " << row.file_b
                  << ": b=" << row.b << " c=" << row.c
                  << " statistic=" << row.result.statistic
                  << " p=" << row.result.p_value << "\n";
      }
      std::cout << "results written to " << xcfg.out_dir << "\n";
    } else if (*analyze) {
      if (!ana_a.empty()) acfg.article_a = ana_a;
      if (!ana_b.empty()) acfg.article_b = ana_b;
      acfg.control_seed = global.seed;
      const Dataset ds = load_dataset(ana_data);
      const AnalyzeRunResult r = run_analyze(ds, acfg);
      std::cout << "k=" << r.k_used << " over " << r.n_rows
                << " users: CEV trained " << r.cev_trained << ", random control "
                << r.cev_control << "\nresults written to " << acfg.out_dir
                << "\n";
    } else if (*baseline) {
      if (base_classifier == "svm") {
        bcfg.use_svm = true;
      } else if (base_classifier == "logreg") {
        bcfg.use_svm = false;
      } else {
        std::cerr << "usage error: unknown classifier '" << base_classifier
                  << "' (expected svm|logreg)\n";
        return 1;
      }
      bcfg.svm.seed = global.seed;
      bcfg.logreg.seed = global.seed;
      bcfg.shuffle_seed = global.seed;
      const Dataset ds = load_dataset(base_data);
      const BaselineRunResult r = run_baseline(ds, bcfg);
      print_metrics(r.cells);
      std::cout << "mean test accuracy " << r.mean_test_accuracy << "\n"
                << "results written to " << bcfg.out_dir << "\n";
    }
  } catch (const ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
