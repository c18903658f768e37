#include "echograph/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "echograph/rng.hpp"

namespace echograph {

namespace {

constexpr std::uint64_t kShuffleStream = 0x53485546ULL;
constexpr std::uint64_t kControlStream = 0x434f4e54ULL;

std::string join(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  if (dir.back() == '/') return dir + name;
  return dir + "/" + name;
}

std::string format_fraction(double f) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", f);
  return buf;
}

void write_manifest(const std::string& out_dir, const KvReport& kv) {
  write_kv_file(join(out_dir, "manifest.txt"), kv);
}

std::string kv_real(double v) { return format_real(v); }

// Shared by experiment and baseline: one metrics CSV row per cell.
void write_metrics_csv(const std::string& path,
                       const std::vector<ExperimentCell>& cells) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out << "fraction,seed,accuracy,precision,recall,f1,auc\n";
  for (const auto& c : cells) {
    out << format_fraction(c.fraction) << ',' << c.seed << ','
        << format_real(c.metrics.accuracy) << ','
        << format_real(c.metrics.macro_precision) << ','
        << format_real(c.metrics.macro_recall) << ','
        << format_real(c.metrics.macro_f1) << ','
        << format_real(c.metrics.auc) << '\n';
  }
}

std::vector<Label> article_labels(const Dataset& ds) {
  std::vector<Label> labels;
  labels.reserve(ds.articles.size());
  for (const auto& a : ds.articles) labels.push_back(a.label);
  return labels;
}

// Consistent label permutation for the no-signal control.
void shuffle_labels_inplace(std::vector<Label>& labels, std::uint64_t seed) {
  Rng rng(hash_seed(seed, kShuffleStream));
  rng.shuffle(labels);
}

double mean_accuracy(const std::vector<ExperimentCell>& cells) {
  if (cells.empty()) return 0.0;
  double s = 0.0;
  for (const auto& c : cells) s += c.metrics.accuracy;
  return s / static_cast<double>(cells.size());
}

}  // namespace

// --- synth -------------------------------------------------------------

SynthRunResult run_synth(const SynthRunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  SynthRunResult result;
  result.data = synth_dataset(cfg.spec);
  result.edges_path = join(cfg.out_dir, "edges.tsv");
  result.articles_path = join(cfg.out_dir, "articles.jsonl");
  result.communities_path = join(cfg.out_dir, "communities.tsv");

  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(cfg.spec.n_users));
  for (NodeId i = 0; i < cfg.spec.n_users; ++i) ids.push_back(synth_user_id(i));
  UserTable users;
  for (const auto& id : ids) users.add(id, false);

  write_edge_file(result.edges_path, result.data.followers, users);
  write_article_file(result.articles_path, result.data.articles);
  write_communities(result.communities_path, ids, result.data.community);

  const SyntheticSpec& s = cfg.spec;
  write_manifest(cfg.out_dir,
                 {{"command", "synth"},
                  {"n_users", std::to_string(s.n_users)},
                  {"n_communities", std::to_string(s.n_communities)},
                  {"p_in", kv_real(s.p_in)},
                  {"p_out", kv_real(s.p_out)},
                  {"reciprocity", kv_real(s.reciprocity)},
                  {"cross_extra_oneway_p", kv_real(s.cross_extra_oneway_p)},
                  {"n_articles", std::to_string(s.n_articles)},
                  {"fake_fraction", kv_real(s.fake_fraction)},
                  {"homophily", kv_real(s.homophily)},
                  {"engagers_min", std::to_string(s.engagers_min)},
                  {"engagers_max", std::to_string(s.engagers_max)},
                  {"text_noise", kv_real(s.text_noise)},
                  {"text_len_min", std::to_string(s.text_len_min)},
                  {"text_len_max", std::to_string(s.text_len_max)},
                  {"tweets_per_article", std::to_string(s.tweets_per_article)},
                  {"tweet_len", std::to_string(s.tweet_len)},
                  {"common_vocab", std::to_string(s.common_vocab)},
                  {"community_vocab", std::to_string(s.community_vocab)},
                  {"seed", std::to_string(s.seed)}});
  return result;
}

// --- ingest -------------------------------------------------------------

namespace {

void append_degree_section(KvReport& kv, const std::string& name,
                           const DegreeStats& st) {
  kv.emplace_back(name + ".avg", format_real(st.avg));
  kv.emplace_back(name + ".std", format_real(st.std_dev));
  kv.emplace_back(name + ".p25", format_real(st.p25));
  kv.emplace_back(name + ".p50", format_real(st.p50));
  kv.emplace_back(name + ".p75", format_real(st.p75));
  kv.emplace_back(name + ".max", std::to_string(st.max));
  kv.emplace_back(name + ".over_listing_cap", std::to_string(st.count_over_cap));
}

}  // namespace

IngestRunResult run_ingest(const IngestRunConfig& cfg) {
  const std::vector<EdgeRecord> edges = read_edge_file(cfg.edges_path);
  const std::vector<RawArticle> raw = read_article_file(cfg.articles_path);
  if (edges.empty()) throw ParseError(cfg.edges_path + ": no edges");

  IngestRunResult result;
  result.dataset = build_dataset(ingest_edges(edges), raw, cfg.min_edges);
  const Dataset& ds = result.dataset;

  ensure_dir(cfg.out_dir);
  write_edge_file(join(cfg.out_dir, "followers.tsv"), ds.followers, ds.users);
  write_edge_file(join(cfg.out_dir, "friendship.tsv"), ds.friendship, ds.users);
  write_user_table(join(cfg.out_dir, "users.tsv"), ds.users);
  write_article_file(join(cfg.out_dir, "articles.jsonl"), raw);

  // Followers of u arrive on in-edges; friends are mutual follows.
  KvReport report;
  report.emplace_back("n_users", std::to_string(ds.followers.n_nodes()));
  report.emplace_back("n_missing_users",
                      std::to_string(ds.users.size() - ds.followers.n_nodes()));
  report.emplace_back("n_follow_edges", std::to_string(ds.followers.n_edges()));
  report.emplace_back("n_friend_pairs",
                      std::to_string(ds.friendship.n_edges() / 2));
  report.emplace_back("n_articles", std::to_string(ds.articles.size()));
  append_degree_section(report, "followers", degree_stats(ds.followers, Direction::in));
  append_degree_section(report, "following", degree_stats(ds.followers, Direction::out));
  append_degree_section(report, "friends", degree_stats(ds.friendship, Direction::out));
  result.degree_report = report;
  write_kv_file(join(cfg.out_dir, "degree_stats.tsv"), report);

  write_manifest(cfg.out_dir, {{"command", "ingest"},
                               {"edges_path", cfg.edges_path},
                               {"articles_path", cfg.articles_path},
                               {"min_edges", std::to_string(cfg.min_edges)}});
  return result;
}

Dataset load_dataset(const std::string& ingest_dir) {
  // users.tsv pins the node numbering: re-deriving it from the edge file's
  // first-seen order would permute nodes whenever one debuts as an edge
  // destination. Graph users precede the article-only (missing) entries.
  UserTable users = read_user_table(join(ingest_dir, "users.tsv"));
  NodeId n_graph = 0;
  while (n_graph < users.size() &&
         !users.missing[static_cast<std::size_t>(n_graph)]) {
    ++n_graph;
  }

  const std::string edges_path = join(ingest_dir, "followers.tsv");
  std::vector<std::pair<NodeId, NodeId>> indexed;
  for (const EdgeRecord& e : read_edge_file(edges_path)) {
    const NodeId s = users.find(e.src);
    const NodeId d = users.find(e.dst);
    if (s < 0 || d < 0 || s >= n_graph || d >= n_graph) {
      throw ParseError(edges_path + ": edge endpoint '" +
                       (s < 0 || s >= n_graph ? e.src : e.dst) +
                       "' is not a stored graph user");
    }
    indexed.emplace_back(s, d);
  }

  Dataset ds;
  ds.followers = graph_from_edges(n_graph, indexed);
  ds.friendship = derive_friendship(ds.followers);
  ds.users = std::move(users);

  const std::string articles_path = join(ingest_dir, "articles.jsonl");
  for (const RawArticle& r : read_article_file(articles_path)) {
    NewsArticle a;
    a.article_id = r.article_id;
    a.label = r.label;
    a.text = r.text;
    a.tweets = r.tweets;
    for (const std::string& ext : r.engaged_users) {
      NodeId id = ds.users.find(ext);
      // Ingest records every engaged user, so an unknown id can only come
      // from a hand-edited directory; treat it like a fresh missing user.
      if (id < 0) id = ds.users.add(ext, true);
      a.engaged_users.push_back(id);
    }
    std::sort(a.engaged_users.begin(), a.engaged_users.end());
    a.engaged_users.erase(
        std::unique(a.engaged_users.begin(), a.engaged_users.end()),
        a.engaged_users.end());
    ds.articles.push_back(std::move(a));
  }
  return ds;
}

// --- embed --------------------------------------------------------------

const char* to_string(EmbedMethod m) {
  switch (m) {
    case EmbedMethod::deepwalk: return "deepwalk";
    case EmbedMethod::sage: return "sage";
    case EmbedMethod::cgcn: return "cgcn";
  }
  return "?";
}

const char* to_string(NetworkChoice n) {
  return n == NetworkChoice::fo ? "fo" : "fr";
}

EmbedMethod embed_method_from_string(const std::string& s) {
  if (s == "deepwalk") return EmbedMethod::deepwalk;
  if (s == "sage") return EmbedMethod::sage;
  if (s == "cgcn") return EmbedMethod::cgcn;
  throw std::invalid_argument("unknown embedding method '" + s +
                              "' (expected deepwalk|sage|cgcn)");
}

NetworkChoice network_from_string(const std::string& s) {
  if (s == "fo") return NetworkChoice::fo;
  if (s == "fr") return NetworkChoice::fr;
  throw std::invalid_argument("unknown network '" + s + "' (expected fo|fr)");
}

EmbedRunResult run_embed(const Dataset& ds, const EmbedRunConfig& cfg) {
  const DirectedGraph& g =
      cfg.network == NetworkChoice::fo ? ds.followers : ds.friendship;
  ensure_dir(cfg.out_dir);

  const WalkCorpus corpus = generate_walks(g, cfg.walk, cfg.threads);
  if (cfg.dump_walks) write_walk_corpus(join(cfg.out_dir, "walks.txt"), corpus);

  EmbedRunResult result;
  KvReport manifest{{"command", "embed"},
                    {"method", to_string(cfg.method)},
                    {"network", to_string(cfg.network)},
                    {"walks_per_node", std::to_string(cfg.walk.walks_per_node)},
                    {"walk_max_len", std::to_string(cfg.walk.max_len)},
                    {"walk_seed", std::to_string(cfg.walk.seed)}};

  if (cfg.method == EmbedMethod::deepwalk) {
    SgTrainResult trained = train_deepwalk(corpus, cfg.sg);
    result.embeddings = std::move(trained.input);
    result.epoch_loss = std::move(trained.epoch_loss);
    manifest.emplace_back("dim", std::to_string(cfg.sg.dim));
    manifest.emplace_back("window", std::to_string(cfg.sg.window));
    manifest.emplace_back("negatives", std::to_string(cfg.sg.negatives_per_pair));
    manifest.emplace_back("epochs", std::to_string(cfg.sg.epochs));
    manifest.emplace_back("lr_initial", kv_real(cfg.sg.lr_initial));
    manifest.emplace_back("lr_final", kv_real(cfg.sg.lr_final));
    manifest.emplace_back("seed", std::to_string(cfg.sg.seed));
  } else {
    const GnnVariant variant = cfg.method == EmbedMethod::sage
                                   ? GnnVariant::sage_mean
                                   : GnnVariant::cluster_gcn;
    GnnTrainResult trained = train_gnn(g, corpus, cfg.gnn, variant);
    result.embeddings = std::move(trained.embeddings);
    result.epoch_loss = std::move(trained.epoch_loss);
    manifest.emplace_back("hidden_dim", std::to_string(cfg.gnn.hidden_dim));
    manifest.emplace_back("out_dim", std::to_string(cfg.gnn.out_dim));
    manifest.emplace_back("epochs", std::to_string(cfg.gnn.epochs));
    manifest.emplace_back("learning_rate", kv_real(cfg.gnn.learning_rate));
    manifest.emplace_back("window", std::to_string(cfg.gnn.window));
    manifest.emplace_back("negatives", std::to_string(cfg.gnn.negatives_per_pair));
    manifest.emplace_back(
        "feature_mode",
        cfg.gnn.feature_mode == FeatureMode::trainable_lookup ? "trainable_lookup"
                                                              : "degree_features");
    manifest.emplace_back("feature_dim", std::to_string(cfg.gnn.feature_dim));
    if (variant == GnnVariant::sage_mean) {
      manifest.emplace_back("fanout1", std::to_string(cfg.gnn.neighbor_samples[0]));
      manifest.emplace_back("fanout2", std::to_string(cfg.gnn.neighbor_samples[1]));
      manifest.emplace_back("pairs_per_epoch",
                            std::to_string(cfg.gnn.pairs_per_epoch));
      manifest.emplace_back("batch_pairs", std::to_string(cfg.gnn.batch_pairs));
    } else {
      manifest.emplace_back("n_partitions", std::to_string(cfg.gnn.n_partitions));
      manifest.emplace_back("partitions_per_batch",
                            std::to_string(cfg.gnn.partitions_per_batch));
      manifest.emplace_back("pairs_per_partition",
                            std::to_string(cfg.gnn.pairs_per_partition));
    }
    manifest.emplace_back("seed", std::to_string(cfg.gnn.seed));
  }

  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(g.n_nodes()));
  for (NodeId i = 0; i < g.n_nodes(); ++i) {
    ids.push_back(ds.users.external_id[static_cast<std::size_t>(i)]);
  }
  result.embedding_path =
      join(cfg.out_dir, cfg.binary ? "embedding.bin" : "embedding.txt");
  write_embeddings(result.embedding_path, result.embeddings, ids, cfg.binary);

  manifest.emplace_back("binary", cfg.binary ? "1" : "0");
  manifest.emplace_back("threads", std::to_string(cfg.threads));
  write_manifest(cfg.out_dir, manifest);
  return result;
}

// --- experiment -----------------------------------------------------------

namespace {

struct CellArtifacts {
  ExperimentCell cell;
  std::vector<PredictionRow> predictions;
  std::vector<SplitRole> roles;
};

// Train on the train rows of the plan, score the test rows.
CellArtifacts evaluate_cell(const std::vector<ArticleVector>& vectors,
                            const std::vector<Label>& labels,
                            const std::vector<std::string>& ids,
                            double fraction, std::uint64_t seed,
                            const ClassifierParams& base_params) {
  CellArtifacts out;
  out.cell.fraction = fraction;
  out.cell.seed = seed;
  const SplitPlan plan = make_splits(labels, fraction, seed);
  out.roles = plan.role;

  std::vector<ArticleVector> train;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (plan.role[i] == SplitRole::train) {
      train.push_back(vectors[i]);
      train.back().label = labels[i];  // honor a shuffled-label control
    }
  }
  ClassifierParams params = base_params;
  params.seed = hash_seed(base_params.seed, seed,
                          static_cast<std::uint64_t>(fraction * 1e6));
  const DenseClassifier clf = train_classifier(train, params).model;

  std::vector<Label> test_labels;
  std::vector<double> test_probs;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (plan.role[i] != SplitRole::test) continue;
    const Prediction p = predict(clf, vectors[i].vec);
    test_labels.push_back(labels[i]);
    test_probs.push_back(p.probability);
    out.predictions.push_back({ids[i], p.probability, p.label});
  }
  out.cell.metrics = compute_metrics(test_labels, test_probs);
  return out;
}

void write_cell_artifacts(const std::string& out_dir,
                          const std::vector<std::string>& ids,
                          const CellArtifacts& cell) {
  const std::string tag = "f" + format_fraction(cell.cell.fraction) + "_s" +
                          std::to_string(cell.cell.seed);
  write_split_file(join(out_dir, "split_" + tag + ".tsv"), ids, cell.roles);
  write_predictions(join(out_dir, "pred_" + tag + ".csv"), cell.predictions);
}

}  // namespace

std::vector<McNemarRow> compare_predictions(
    const Dataset& ds, const std::vector<std::string>& prediction_files) {
  std::unordered_map<std::string, Label> truth;
  for (const auto& a : ds.articles) truth.emplace(a.article_id, a.label);

  struct Loaded {
    std::string path;
    std::unordered_map<std::string, Label> predicted;
  };
  std::vector<Loaded> loaded;
  for (const auto& path : prediction_files) {
    Loaded l;
    l.path = path;
    for (const auto& row : read_predictions(path)) {
      if (!truth.count(row.article_id)) {
        throw std::invalid_argument(path + ": unknown article id '" +
                                    row.article_id + "'");
      }
      l.predicted[row.article_id] = row.label;
    }
    loaded.push_back(std::move(l));
  }

  std::vector<McNemarRow> rows;
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    for (std::size_t j = i + 1; j < loaded.size(); ++j) {
      McNemarRow row;
      row.file_a = loaded[i].path;
      row.file_b = loaded[j].path;
      for (const auto& [id, pred_a] : loaded[i].predicted) {
        auto it = loaded[j].predicted.find(id);
        if (it == loaded[j].predicted.end()) continue;
        const Label actual = truth.at(id);
        const bool a_ok = pred_a == actual;
        const bool b_ok = it->second == actual;
        if (a_ok && !b_ok) ++row.b;
        if (!a_ok && b_ok) ++row.c;
      }
      row.result = mcnemar(row.b, row.c);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

ExperimentRunResult run_experiment(const Dataset& ds,
                                   const ExperimentRunConfig& cfg) {
  ExperimentRunResult result;
  ensure_dir(cfg.out_dir);
  const std::string metrics_path = join(cfg.out_dir, "metrics.csv");
  if (!cfg.force && file_exists(metrics_path)) {
    throw std::runtime_error(metrics_path +
                             " already exists; pass --force to overwrite");
  }

  KvReport manifest{{"command", "experiment"},
                    {"embedding_path", cfg.embedding_path}};

  if (!cfg.embedding_path.empty()) {
    const EmbeddingFile file = read_embeddings(cfg.embedding_path);
    const EmbeddingMatrix aligned = align_embeddings(file, ds.users);

    std::vector<ArticleVector> vectors;
    std::vector<std::string> ids;
    vectors.reserve(ds.articles.size());
    for (const auto& a : ds.articles) {
      vectors.push_back(aggregate_article(a, aligned, ds.users));
      ids.push_back(a.article_id);
    }
    std::vector<Label> labels = article_labels(ds);
    if (cfg.shuffle_labels) shuffle_labels_inplace(labels, cfg.shuffle_seed);

    for (double fraction : cfg.fractions) {
      for (std::uint64_t seed : cfg.seeds) {
        CellArtifacts cell = evaluate_cell(vectors, labels, ids, fraction, seed,
                                           cfg.classifier);
        write_cell_artifacts(cfg.out_dir, ids, cell);
        result.cells.push_back(cell.cell);
      }
    }
    result.mean_test_accuracy = mean_accuracy(result.cells);
    write_metrics_csv(metrics_path, result.cells);

    std::string fr, sd;
    for (double f : cfg.fractions) fr += (fr.empty() ? "" : " ") + format_fraction(f);
    for (std::uint64_t s : cfg.seeds) sd += (sd.empty() ? "" : " ") + std::to_string(s);
    manifest.emplace_back("fractions", fr);
    manifest.emplace_back("seeds", sd);
    manifest.emplace_back("classifier_epochs", std::to_string(cfg.classifier.epochs));
    manifest.emplace_back("classifier_lr_initial", kv_real(cfg.classifier.lr_initial));
    manifest.emplace_back("classifier_lr_final", kv_real(cfg.classifier.lr_final));
    manifest.emplace_back("classifier_seed", std::to_string(cfg.classifier.seed));
    manifest.emplace_back("shuffle_labels", cfg.shuffle_labels ? "1" : "0");
    if (cfg.shuffle_labels) {
      manifest.emplace_back("shuffle_seed", std::to_string(cfg.shuffle_seed));
    }
  }

  if (cfg.compare_files.size() >= 2) {
    result.comparisons = compare_predictions(ds, cfg.compare_files);
    std::ofstream out(join(cfg.out_dir, "mcnemar.tsv"));
    out << "file_a\tfile_b\tb\tc\tstatistic\tp_value\n";
    for (const auto& row : result.comparisons) {
      out << row.file_a << '\t' << row.file_b << '\t' << row.b << '\t' << row.c
          << '\t' << format_real(row.result.statistic) << '\t'
          << format_real(row.result.p_value) << '\n';
    }
    std::string cf;
    for (const auto& f : cfg.compare_files) cf += (cf.empty() ? "" : " ") + f;
    manifest.emplace_back("compare_files", cf);
  } else if (cfg.embedding_path.empty()) {
    throw std::invalid_argument(
        "experiment: need an embedding or at least two prediction files");
  }

  write_manifest(cfg.out_dir, manifest);
  return result;
}

// --- analyze ----------------------------------------------------------

AnalyzeRunResult run_analyze(const Dataset& ds, const AnalyzeRunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  const EmbeddingFile file = read_embeddings(cfg.embedding_path);
  const EmbeddingMatrix aligned = align_embeddings(file, ds.users);

  const bool pair_mode = cfg.article_a.has_value() && cfg.article_b.has_value();
  std::vector<NodeId> rows;
  std::vector<std::string> tags;

  if (pair_mode) {
    const NewsArticle* a = nullptr;
    const NewsArticle* b = nullptr;
    for (const auto& art : ds.articles) {
      if (art.article_id == *cfg.article_a) a = &art;
      if (art.article_id == *cfg.article_b) b = &art;
    }
    if (!a) throw std::invalid_argument("unknown article id '" + *cfg.article_a + "'");
    if (!b) throw std::invalid_argument("unknown article id '" + *cfg.article_b + "'");
    std::set<NodeId> in_a(a->engaged_users.begin(), a->engaged_users.end());
    std::set<NodeId> in_b(b->engaged_users.begin(), b->engaged_users.end());
    std::set<NodeId> all(in_a);
    all.insert(in_b.begin(), in_b.end());
    for (NodeId u : all) {
      if (ds.users.missing[static_cast<std::size_t>(u)]) continue;
      rows.push_back(u);
      const bool ia = in_a.count(u) > 0, ib = in_b.count(u) > 0;
      tags.push_back(ia && ib ? "both" : (ia ? "a" : "b"));
    }
  } else {
    // Global grouping: a user is fake-engaged iff they engaged with at
    // least one fake-labeled article.
    std::vector<char> engaged(static_cast<std::size_t>(ds.users.size()), 0);
    std::vector<char> fake_engaged(engaged.size(), 0);
    for (const auto& art : ds.articles) {
      for (NodeId u : art.engaged_users) {
        engaged[static_cast<std::size_t>(u)] = 1;
        if (art.label == Label::fake) fake_engaged[static_cast<std::size_t>(u)] = 1;
      }
    }
    for (NodeId u = 0; u < ds.users.size(); ++u) {
      if (!engaged[static_cast<std::size_t>(u)]) continue;
      if (ds.users.missing[static_cast<std::size_t>(u)]) continue;
      rows.push_back(u);
      tags.push_back(fake_engaged[static_cast<std::size_t>(u)] ? "fake-engaged"
                                                               : "factual-only");
    }
  }
  if (rows.size() < 3) {
    throw std::invalid_argument("analyze: fewer than 3 relevant users");
  }

  EmbeddingMatrix data(static_cast<int>(rows.size()), aligned.dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(aligned.row(rows[i]), aligned.row(rows[i]) + aligned.dim,
              data.row(static_cast<int>(i)));
  }

  AnalyzeRunResult result;
  result.n_rows = data.n_rows;
  result.k_used = std::min({cfg.k, data.dim, data.n_rows - 1});
  if (result.k_used < 2) throw std::invalid_argument("analyze: k_used < 2");

  const PcaModel trained = pca_fit(data, result.k_used);
  result.cev_trained = cev(trained, result.k_used);
  const EmbeddingMatrix control = random_embeddings(
      data.n_rows, data.dim, hash_seed(cfg.control_seed, kControlStream));
  const PcaModel control_model = pca_fit(control, result.k_used);
  result.cev_control = cev(control_model, result.k_used);
  result.projection = project2d(trained, data, tags);

  {
    std::ofstream out(join(cfg.out_dir, "projection.csv"));
    out << "x,y,tag\n";
    for (const auto& p : result.projection) {
      out << format_real(p.x) << ',' << format_real(p.y) << ',' << p.tag << '\n';
    }
  }
  write_kv_file(join(cfg.out_dir, "cev.tsv"),
                {{"k_requested", std::to_string(cfg.k)},
                 {"k_used", std::to_string(result.k_used)},
                 {"n_users", std::to_string(result.n_rows)},
                 {"dim", std::to_string(data.dim)},
                 {"cev_trained", format_real(result.cev_trained)},
                 {"cev_control", format_real(result.cev_control)}});

  KvReport manifest{{"command", "analyze"},
                    {"embedding_path", cfg.embedding_path},
                    {"k", std::to_string(cfg.k)},
                    {"control_seed", std::to_string(cfg.control_seed)}};
  if (pair_mode) {
    manifest.emplace_back("article_a", *cfg.article_a);
    manifest.emplace_back("article_b", *cfg.article_b);
  }
  write_manifest(cfg.out_dir, manifest);
  return result;
}

// --- baseline -----------------------------------------------------------

BaselineRunResult run_baseline(const Dataset& ds, const BaselineRunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  BaselineRunResult result;

  std::vector<std::vector<std::string>> docs;
  std::vector<std::string> ids;
  docs.reserve(ds.articles.size());
  for (const auto& a : ds.articles) {
    docs.push_back(article_tokens(a));
    ids.push_back(a.article_id);
  }
  std::vector<Label> labels = article_labels(ds);
  if (cfg.shuffle_labels) shuffle_labels_inplace(labels, cfg.shuffle_seed);

  auto sigmoid = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };

  bool vocab_written = false;
  for (double fraction : cfg.fractions) {
    for (std::uint64_t seed : cfg.seeds) {
      const SplitPlan plan = make_splits(labels, fraction, seed);

      std::vector<std::vector<std::string>> train_docs;
      for (std::size_t i = 0; i < docs.size(); ++i) {
        if (plan.role[i] == SplitRole::train) train_docs.push_back(docs[i]);
      }
      const TfidfModel tfidf = tfidf_fit(train_docs, cfg.max_vocab);
      if (!vocab_written) {
        write_vocabulary(join(cfg.out_dir, "vocabulary.tsv"), tfidf);
        vocab_written = true;
      }

      std::vector<SparseVec> x(docs.size());
      for (std::size_t i = 0; i < docs.size(); ++i) {
        x[i] = tfidf_transform(tfidf, docs[i]);
      }

      std::vector<double> probs(docs.size(), 0.5);
      if (cfg.use_svm) {
        std::vector<SparseVec> train_x;
        std::vector<int> train_y;
        for (std::size_t i = 0; i < docs.size(); ++i) {
          if (plan.role[i] != SplitRole::train) continue;
          train_x.push_back(x[i]);
          train_y.push_back(labels[i] == Label::fake ? 1 : -1);
        }
        SvmParams params = cfg.svm;
        params.seed = hash_seed(cfg.svm.seed, seed,
                                static_cast<std::uint64_t>(fraction * 1e6));
        const SvmModel svm = svm_train(train_x, train_y, params);
        for (std::size_t i = 0; i < docs.size(); ++i) {
          // Monotone squash of the margin: same ranking (AUC) and the same
          // 0.5 decision boundary as the signed decision value.
          probs[i] = sigmoid(svm_decision(svm, x[i]));
        }
      } else {
        std::vector<SparseVec> train_x;
        std::vector<int> train_y;
        for (std::size_t i = 0; i < docs.size(); ++i) {
          if (plan.role[i] != SplitRole::train) continue;
          train_x.push_back(x[i]);
          train_y.push_back(labels[i] == Label::fake ? 1 : 0);
        }
        SparseLogRegParams params = cfg.logreg;
        params.seed = hash_seed(cfg.logreg.seed, seed,
                                static_cast<std::uint64_t>(fraction * 1e6));
        const SparseLogReg lr = logreg_train(
            train_x, train_y, static_cast<int>(tfidf.tokens.size()), params);
        for (std::size_t i = 0; i < docs.size(); ++i) {
          probs[i] = logreg_prob(lr, x[i]);
        }
      }

      CellArtifacts cell;
      cell.cell.fraction = fraction;
      cell.cell.seed = seed;
      cell.roles = plan.role;
      std::vector<Label> test_labels;
      std::vector<double> test_probs;
      for (std::size_t i = 0; i < docs.size(); ++i) {
        if (plan.role[i] != SplitRole::test) continue;
        test_labels.push_back(labels[i]);
        test_probs.push_back(probs[i]);
        cell.predictions.push_back(
            {ids[i], probs[i], probs[i] >= 0.5 ? Label::fake : Label::factual});
      }
      cell.cell.metrics = compute_metrics(test_labels, test_probs);
      write_cell_artifacts(cfg.out_dir, ids, cell);
      result.cells.push_back(cell.cell);
    }
  }
  result.mean_test_accuracy = mean_accuracy(result.cells);
  write_metrics_csv(join(cfg.out_dir, "metrics.csv"), result.cells);

  std::string fr, sd;
  for (double f : cfg.fractions) fr += (fr.empty() ? "" : " ") + format_fraction(f);
  for (std::uint64_t s : cfg.seeds) sd += (sd.empty() ? "" : " ") + std::to_string(s);
  write_manifest(
      cfg.out_dir,
      {{"command", "baseline"},
       {"classifier", cfg.use_svm ? "svm" : "logreg"},
       {"fractions", fr},
       {"seeds", sd},
       {"max_vocab", std::to_string(cfg.max_vocab)},
       {"svm_C", kv_real(cfg.svm.C)},
       {"svm_gamma", kv_real(cfg.svm.gamma)},
       {"svm_tol", kv_real(cfg.svm.tol)},
       {"shuffle_labels", cfg.shuffle_labels ? "1" : "0"}});
  return result;
}

}  // namespace echograph
