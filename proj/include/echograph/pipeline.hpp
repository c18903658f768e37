#pragma once

// End-to-end orchestration used by both the command-line tool and the
// acceptance harness. Every run_* call resolves its configuration, writes
// its artifacts plus a manifest.txt into the target directory, and returns
// the in-memory results. Artifacts are timestamp-free and byte-reproducible
// from the manifest alone.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "echograph/analysis.hpp"
#include "echograph/eval.hpp"
#include "echograph/gnn.hpp"
#include "echograph/graph.hpp"
#include "echograph/io.hpp"
#include "echograph/newsmodel.hpp"
#include "echograph/skipgram.hpp"
#include "echograph/synth.hpp"
#include "echograph/textbase.hpp"
#include "echograph/walks.hpp"

namespace echograph {

// --- synth -----------------------------------------------------------------

struct SynthRunConfig {
  SyntheticSpec spec;
  std::string out_dir;
};

struct SynthRunResult {
  std::string edges_path;
  std::string articles_path;
  std::string communities_path;
  SyntheticData data;
};

SynthRunResult run_synth(const SynthRunConfig& cfg);

// --- ingest ------------------------------------------------------------

struct IngestRunConfig {
  std::string edges_path;
  std::string articles_path;
  std::string out_dir;
  int min_edges = 2;
};

struct IngestRunResult {
  Dataset dataset;
  KvReport degree_report;
};

IngestRunResult run_ingest(const IngestRunConfig& cfg);

// Rebuilds the Dataset from an ingest output directory (no re-pruning).
Dataset load_dataset(const std::string& ingest_dir);

// --- embed ------------------------------------------------------------

enum class EmbedMethod { deepwalk, sage, cgcn };
enum class NetworkChoice { fo, fr };

const char* to_string(EmbedMethod m);
const char* to_string(NetworkChoice n);
EmbedMethod embed_method_from_string(const std::string& s);
NetworkChoice network_from_string(const std::string& s);

struct EmbedRunConfig {
  EmbedMethod method = EmbedMethod::deepwalk;
  NetworkChoice network = NetworkChoice::fr;
  WalkParams walk;
  SgParams sg;     // deepwalk
  GnnParams gnn;   // sage / cgcn
  bool binary = false;
  bool dump_walks = false;
  int threads = 1;
  std::string out_dir;
};

struct EmbedRunResult {
  std::string embedding_path;
  EmbeddingMatrix embeddings;       // rows = graph nodes
  std::vector<double> epoch_loss;
};

EmbedRunResult run_embed(const Dataset& ds, const EmbedRunConfig& cfg);

// --- experiment --------------------------------------------------------

struct ExperimentRunConfig {
  std::string embedding_path;
  std::vector<double> fractions = {0.9};
  std::vector<std::uint64_t> seeds = {1};
  ClassifierParams classifier;
  // Control: permute article labels (consistently for training and
  // scoring) before splitting; signal-free data must score ~0.5.
  bool shuffle_labels = false;
  std::uint64_t shuffle_seed = 1;
  // Prediction files to compare pairwise with McNemar's test.
  std::vector<std::string> compare_files;
  bool force = false;
  std::string out_dir;
};

struct ExperimentCell {
  double fraction = 0.0;
  std::uint64_t seed = 0;
  Metrics metrics;
};

struct McNemarRow {
  std::string file_a, file_b;
  std::int64_t b = 0, c = 0;  // discordant counts
  McNemarResult result;
};

struct ExperimentRunResult {
  std::vector<ExperimentCell> cells;
  double mean_test_accuracy = 0.0;
  std::vector<McNemarRow> comparisons;
};

ExperimentRunResult run_experiment(const Dataset& ds,
                                   const ExperimentRunConfig& cfg);

// Pairwise McNemar over prediction files; true labels come from ds.
// Files are compared on the intersection of their article ids.
std::vector<McNemarRow> compare_predictions(
    const Dataset& ds, const std::vector<std::string>& prediction_files);

// --- analyze -----------------------------------------------------------

struct AnalyzeRunConfig {
  std::string embedding_path;
  int k = 50;                        // capped at dim and n_rows - 1
  // When both ids are set, the projection covers only users engaged with
  // either article (tags a / b / both) instead of the global grouping.
  std::optional<std::string> article_a;
  std::optional<std::string> article_b;
  std::uint64_t control_seed = 1;
  std::string out_dir;
};

struct AnalyzeRunResult {
  int k_used = 0;
  double cev_trained = 0.0;
  double cev_control = 0.0;   // random same-shape embeddings
  int n_rows = 0;
  std::vector<ProjectedPoint> projection;
};

AnalyzeRunResult run_analyze(const Dataset& ds, const AnalyzeRunConfig& cfg);

// --- textual baseline ------------------------------------------------------

struct BaselineRunConfig {
  std::vector<double> fractions = {0.9};
  std::vector<std::uint64_t> seeds = {1};
  bool use_svm = true;      // false = logistic-regression fallback
  SvmParams svm;
  SparseLogRegParams logreg;
  int max_vocab = 10000;
  bool shuffle_labels = false;
  std::uint64_t shuffle_seed = 1;
  std::string out_dir;
};

struct BaselineRunResult {
  std::vector<ExperimentCell> cells;
  double mean_test_accuracy = 0.0;
};

BaselineRunResult run_baseline(const Dataset& ds, const BaselineRunConfig& cfg);

}  // namespace echograph
