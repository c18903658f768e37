#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <vector>

#include "echograph/gnn.hpp"
#include "echograph/rng.hpp"
#include "echograph/walks.hpp"

#include "common.hpp"

using namespace echograph;

namespace {

Tensor identity(int d) {
  Tensor t(d, d);
  for (int i = 0; i < d; ++i) t.at(i, i) = 1.0;
  return t;
}

Tensor zeros(int r, int c) { return Tensor(r, c); }

DirectedGraph two_cliques(int size_each) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (int base : {0, size_each}) {
    for (int i = 0; i < size_each; ++i) {
      for (int j = 0; j < size_each; ++j) {
        if (i != j) edges.emplace_back(base + i, base + j);
      }
    }
  }
  return graph_from_edges(2 * size_each, edges);
}

DirectedGraph random_graph(NodeId n, double p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i != j && rng.bernoulli(p)) edges.emplace_back(i, j);
    }
  }
  return graph_from_edges(n, edges);
}

double cosine(const double* a, const double* b, int d) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (int i = 0; i < d; ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / (std::sqrt(na) * std::sqrt(nb) + 1e-300);
}

// Identical-shape random linear functional over the network output: the
// scalar loss used by the finite-difference checks.
double weighted_sum(const Tensor& out, const Tensor& r) {
  double s = 0.0;
  for (std::size_t i = 0; i < out.v.size(); ++i) s += out.v[i] * r.v[i];
  return s;
}

struct ForwardSetup {
  GnnVariant variant;
  SagePlan plan;      // sage
  CsrMatrix a_hat;    // gcn
  std::vector<NodeId> nodes;
};

double forward_loss(const GnnModel& model, const ForwardSetup& fs,
                    const Tensor& r) {
  Tape tape;
  const GnnTapeIds ids = stage_params(tape, model, fs.variant);
  const int out = fs.variant == GnnVariant::sage_mean
                      ? sage_forward(tape, fs.plan, ids)
                      : gcn_forward(tape, fs.a_hat, ids, fs.nodes);
  return weighted_sum(tape.value(out), r);
}

// Full-network finite-difference check against the tape gradients for one
// random instance. Returns the worst relative disagreement observed.
bool fd_check_network(GnnVariant variant, std::uint64_t seed,
                      double tol = 1e-4) {
  const DirectedGraph g = random_graph(10, 0.3, seed);
  GnnParams params;
  params.hidden_dim = 4;
  params.out_dim = 4;
  params.feature_dim = 4;
  params.feature_mode = FeatureMode::trainable_lookup;
  params.neighbor_samples = {3, 2};
  params.seed = seed;
  GnnModel model = init_gnn_model(g, params, variant);

  // Finite differences only make sense at generic points. With biases at
  // their zero initialization, a dead-ReLU node can feed layer 2 nothing
  // but b2, parking an output row exactly on the L2-normalization origin
  // where the loss is not locally linear. Nudge the biases off that set.
  Rng jitter(hash_seed(seed, 0xb1a5ULL));
  for (Tensor* bias : {&model.b1, &model.b2}) {
    for (double& v : bias->v) {
      v += jitter.range(0.02, 0.1) * (jitter.bernoulli(0.5) ? 1.0 : -1.0);
    }
  }

  ForwardSetup fs;
  fs.variant = variant;
  if (variant == GnnVariant::sage_mean) {
    std::vector<NodeId> targets;
    for (NodeId v = 0; v < g.n_nodes(); ++v) targets.push_back(v);
    Rng rng(hash_seed(seed, 0xfdfdULL));
    fs.plan = build_sage_plan(g, targets, params.neighbor_samples, rng);
  } else {
    fs.a_hat = gcn_normalize(g);
    for (NodeId v = 0; v < g.n_nodes(); ++v) fs.nodes.push_back(v);
  }

  Tensor r(g.n_nodes(), params.out_dim);
  Rng rrng(hash_seed(seed, 0x52525252ULL));
  for (auto& v : r.v) v = rrng.range(-1.0, 1.0);

  // Analytic gradients.
  Tape tape;
  const GnnTapeIds ids = stage_params(tape, model, variant);
  const int out = fs.variant == GnnVariant::sage_mean
                      ? sage_forward(tape, fs.plan, ids)
                      : gcn_forward(tape, fs.a_hat, ids, fs.nodes);
  tape.grad(out) = r;
  tape.backward();

  const auto tape_ids = ids.all();
  auto ptrs = gnn_param_ptrs(model, variant, params.feature_mode);
  REQUIRE(tape_ids.size() == ptrs.size());

  bool ok = true;
  for (std::size_t p = 0; p < ptrs.size(); ++p) {
    const Tensor& analytic = tape.grad(tape_ids[p]);
    Tensor& param = *ptrs[p];
    for (std::size_t e = 0; e < param.v.size(); ++e) {
      const double saved = param.v[e];
      auto f = [&](double v) {
        param.v[e] = v;
        const double val = forward_loss(model, fs, r);
        param.v[e] = saved;
        return val;
      };
      const double numeric = testutil::central_diff(f, saved);
      if (!testutil::grad_close(analytic.v[e], numeric, tol)) {
        MESSAGE("param ", p, " entry ", e, ": analytic ", analytic.v[e],
                " numeric ", numeric);
        ok = false;
      }
    }
  }
  return ok;
}

}  // namespace

TEST_SUITE("gnn") {

TEST_CASE("mean aggregate of a single neighbor is that neighbor") {
  const int d = 3;
  const std::vector<double> self = {9.0, 9.0, 9.0};
  const std::vector<double> v = {0.5, -1.5, 2.0};
  const auto out = mean_aggregate(self, {v}, zeros(d, d), identity(d),
                                  std::vector<double>(d, 0.0), false);
  REQUIRE(out.size() == 3);
  for (int i = 0; i < d; ++i) CHECK(out[i] == doctest::Approx(v[i]));
}

TEST_CASE("opposite neighbors cancel in the mean term") {
  const int d = 2;
  const std::vector<double> v = {1.25, -3.0};
  std::vector<double> neg = {-1.25, 3.0};
  const auto out =
      mean_aggregate(std::vector<double>(d, 0.0), {v, neg}, identity(d),
                     identity(d), std::vector<double>(d, 0.0), false);
  CHECK(out[0] == doctest::Approx(0.0));
  CHECK(out[1] == doctest::Approx(0.0));
}

TEST_CASE("identity weights average the neighbor block") {
  const int d = 2;
  const std::vector<double> a = {2.0, 0.0};
  const std::vector<double> b = {0.0, 2.0};
  const auto out =
      mean_aggregate(std::vector<double>(d, 0.0), {a, b}, identity(d),
                     identity(d), std::vector<double>(d, 0.0), false);
  CHECK(out[0] == doctest::Approx(1.0));
  CHECK(out[1] == doctest::Approx(1.0));
}

TEST_CASE("empty neighborhood contributes a zero mean term") {
  const int d = 2;
  const std::vector<double> self = {3.0, -1.0};
  const auto out = mean_aggregate(self, {}, identity(d), identity(d),
                                  std::vector<double>{0.5, 0.5}, false);
  CHECK(out[0] == doctest::Approx(3.5));
  CHECK(out[1] == doctest::Approx(-0.5));
}

TEST_CASE("relu nonlinearity clamps negatives") {
  const int d = 2;
  const std::vector<double> self = {-4.0, 4.0};
  const auto out = mean_aggregate(self, {}, identity(d), identity(d),
                                  std::vector<double>(d, 0.0), true);
  CHECK(out[0] == 0.0);
  CHECK(out[1] == doctest::Approx(4.0));
}

TEST_CASE("mean aggregate validates dimensions") {
  CHECK_THROWS_AS(
      mean_aggregate({1.0, 2.0}, {{1.0}}, identity(2), identity(2),
                     {0.0, 0.0}, false),
      std::invalid_argument);
}

TEST_CASE("normalized adjacency of an isolated node is the identity") {
  DirectedGraph g;
  g.out_adj.resize(1);
  g.in_adj.resize(1);
  const auto a = gcn_normalize(g);
  REQUIRE(a.rows == 1);
  REQUIRE(a.col_idx.size() == 1);
  CHECK(a.col_idx[0] == 0);
  CHECK(a.val[0] == doctest::Approx(1.0));
}

TEST_CASE("normalized adjacency of a two-node path is all one-half") {
  const auto g = graph_from_edges(2, {{0, 1}});
  const auto a = gcn_normalize(g);
  REQUIRE(a.val.size() == 4);
  for (double v : a.val) CHECK(v == doctest::Approx(0.5));
}

TEST_CASE("normalized adjacency is symmetric") {
  const auto g = random_graph(12, 0.25, 5);
  const auto a = gcn_normalize(g);
  for (int i = 0; i < a.rows; ++i) {
    for (int e = a.row_ptr[i]; e < a.row_ptr[i + 1]; ++e) {
      const int j = a.col_idx[e];
      // find (j, i)
      double mirror = 0.0;
      bool found = false;
      for (int f = a.row_ptr[j]; f < a.row_ptr[j + 1]; ++f) {
        if (a.col_idx[f] == i) {
          mirror = a.val[f];
          found = true;
        }
      }
      REQUIRE(found);
      CHECK(a.val[e] == doctest::Approx(mirror).epsilon(1e-14));
    }
  }
}

TEST_CASE("partitioning keeps disconnected cliques whole") {
  const auto g = two_cliques(6);
  const auto part = partition_graph(g, 2, 3);
  REQUIRE(part.size() == 12);
  for (int i = 1; i < 6; ++i) CHECK(part[i] == part[0]);
  for (int i = 7; i < 12; ++i) CHECK(part[i] == part[6]);
  CHECK(part[0] != part[6]);
}

TEST_CASE("single partition swallows every node") {
  const auto g = random_graph(9, 0.3, 11);
  const auto part = partition_graph(g, 1, 1);
  for (int p : part) CHECK(p == 0);
}

TEST_CASE("partition map is total and respects the balance bound") {
  const auto g = random_graph(40, 0.12, 7);
  const int k = 5;
  const auto part = partition_graph(g, k, 2);
  REQUIRE(part.size() == 40);
  std::vector<int> sizes(k, 0);
  for (int p : part) {
    REQUIRE(p >= 0);
    REQUIRE(p < k);
    ++sizes[p];
  }
  const int cap = 2 * ((40 + k - 1) / k);
  for (int s : sizes) CHECK(s <= cap);
}

TEST_CASE("partition count above node count is rejected") {
  const auto g = random_graph(4, 0.5, 1);
  CHECK_THROWS_AS(partition_graph(g, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(partition_graph(g, 0, 1), std::invalid_argument);
}

TEST_CASE("sampled plans respect neighborhoods") {
  const auto g = random_graph(20, 0.3, 9);
  const auto adj = symmetrized_adjacency(g);
  std::vector<NodeId> targets = {0, 5, 11, 19};
  Rng rng(77);
  const auto plan = build_sage_plan(adj, targets, {4, 3}, rng);
  REQUIRE(plan.targets == targets);
  // Every layer-2 neighbor of target t is a symmetrized neighbor of t.
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const auto& nbrs = adj[static_cast<std::size_t>(targets[t])];
    const int deg = static_cast<int>(nbrs.size());
    const int lo = plan.nbr2_off[t], hi = plan.nbr2_off[t + 1];
    if (deg == 0) {
      CHECK(lo == hi);
      continue;
    }
    CHECK(hi - lo == 3);  // fanout, padded cyclically when deg < 3
    std::set<NodeId> seen;
    for (int e = lo; e < hi; ++e) {
      const NodeId nbr = plan.frontier1[static_cast<std::size_t>(plan.nbr2[e])];
      seen.insert(nbr);
      CHECK(std::binary_search(nbrs.begin(), nbrs.end(), nbr));
    }
    if (deg > 3) CHECK(seen.size() == 3);  // without replacement
    if (deg <= 3) CHECK(seen.size() == static_cast<std::size_t>(deg));
  }
}

TEST_CASE("sage full-network gradients match finite differences") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    CHECK(fd_check_network(GnnVariant::sage_mean, seed));
  }
}

TEST_CASE("cluster-gcn full-network gradients match finite differences") {
  for (std::uint64_t seed : {4ULL, 5ULL, 6ULL}) {
    CHECK(fd_check_network(GnnVariant::cluster_gcn, seed));
  }
}

TEST_CASE("degree-feature mode leaves features out of the trained set") {
  const auto g = random_graph(8, 0.3, 2);
  GnnParams params;
  params.feature_mode = FeatureMode::degree_features;
  GnnModel model = init_gnn_model(g, params, GnnVariant::sage_mean);
  const auto ptrs =
      gnn_param_ptrs(model, GnnVariant::sage_mean, params.feature_mode);
  for (Tensor* t : ptrs) CHECK(t != &model.features);
}

TEST_CASE("all-zero weights give all-zero output through the norm guard") {
  const auto g = random_graph(6, 0.4, 3);
  GnnParams params;
  params.hidden_dim = 3;
  params.out_dim = 3;
  params.feature_dim = 3;
  GnnModel model = init_gnn_model(g, params, GnnVariant::sage_mean);
  model.w1_self = zeros(3, 3);
  model.w1_nbr = zeros(3, 3);
  model.w2_self = zeros(3, 3);
  model.w2_nbr = zeros(3, 3);
  model.b1 = zeros(1, 3);
  model.b2 = zeros(1, 3);

  std::vector<NodeId> targets;
  for (NodeId v = 0; v < 6; ++v) targets.push_back(v);
  Rng rng(4);
  const auto plan = build_sage_plan(g, targets, params.neighbor_samples, rng);
  Tape tape;
  const auto ids = stage_params(tape, model, GnnVariant::sage_mean);
  const int out = sage_forward(tape, plan, ids);
  for (double v : tape.value(out).v) CHECK(v == 0.0);
}

TEST_CASE("automorphic nodes of a four-cycle embed identically") {
  // 0-1-2-3-0 ring; swapping 0 and 2 is a graph automorphism that fixes
  // 1 and 3, so giving 0 and 2 the same features forces equal embeddings.
  const auto g = graph_from_edges(
      4, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {2, 3}, {3, 2}, {3, 0}, {0, 3}});
  GnnParams params;
  params.hidden_dim = 4;
  params.out_dim = 4;
  params.feature_dim = 3;
  GnnModel model = init_gnn_model(g, params, GnnVariant::sage_mean);
  const std::vector<double> orbit = {0.3, -0.2, 0.9};
  const std::vector<double> f1 = {1.0, 0.4, -0.5};
  const std::vector<double> f3 = {-0.8, 0.1, 0.2};
  std::copy(orbit.begin(), orbit.end(), model.features.row(0));
  std::copy(orbit.begin(), orbit.end(), model.features.row(2));
  std::copy(f1.begin(), f1.end(), model.features.row(1));
  std::copy(f3.begin(), f3.end(), model.features.row(3));

  for (std::array<int, 2> fanouts : {std::array<int, 2>{2, 2},
                                     std::array<int, 2>{3, 3}}) {
    std::vector<NodeId> targets = {0, 1, 2, 3};
    Rng rng(1);
    const auto plan = build_sage_plan(g, targets, fanouts, rng);
    Tape tape;
    const auto ids = stage_params(tape, model, GnnVariant::sage_mean);
    const int out = sage_forward(tape, plan, ids);
    const Tensor& e = tape.value(out);
    for (int d = 0; d < e.cols; ++d) {
      CHECK(e.at(0, d) == e.at(2, d));  // bitwise
    }
  }
}

TEST_CASE("isolated node's embedding ignores every other feature") {
  const auto g = graph_from_edges(5, {{0, 1}, {1, 0}, {1, 2}});  // 4 isolated
  GnnParams params;
  params.hidden_dim = 4;
  params.out_dim = 4;
  params.feature_dim = 3;
  GnnModel model = init_gnn_model(g, params, GnnVariant::sage_mean);

  auto embed_row4 = [&](const GnnModel& m) {
    std::vector<NodeId> targets = {4};
    Rng rng(9);
    const auto plan = build_sage_plan(g, targets, params.neighbor_samples, rng);
    Tape tape;
    const auto ids = stage_params(tape, m, GnnVariant::sage_mean);
    const int out = sage_forward(tape, plan, ids);
    return tape.value(out).v;
  };

  const auto before = embed_row4(model);
  GnnModel tweaked = model;
  for (NodeId v = 0; v < 4; ++v) {
    for (int d = 0; d < 3; ++d) tweaked.features.at(v, d) += 10.0;
  }
  const auto after = embed_row4(tweaked);
  CHECK(before == after);
  for (double v : before) CHECK(std::isfinite(v));
}

TEST_CASE("single-partition cluster-gcn equals the unpartitioned forward") {
  const auto g = random_graph(14, 0.25, 21);
  GnnParams params;
  params.hidden_dim = 4;
  params.out_dim = 5;
  params.feature_dim = 3;
  params.n_partitions = 1;
  params.epochs = 0;
  params.seed = 17;

  WalkParams wp;
  wp.walks_per_node = 2;
  wp.max_len = 6;
  const auto corpus = generate_walks(g, wp);
  const auto trained = train_gnn(g, corpus, params, GnnVariant::cluster_gcn);

  // Manual unpartitioned forward of the same initialization.
  GnnModel model = init_gnn_model(g, params, GnnVariant::cluster_gcn);
  const auto a_hat = gcn_normalize(g);
  std::vector<NodeId> nodes;
  for (NodeId v = 0; v < g.n_nodes(); ++v) nodes.push_back(v);
  Tape tape;
  const auto ids = stage_params(tape, model, GnnVariant::cluster_gcn);
  const int out = gcn_forward(tape, a_hat, ids, nodes);
  const Tensor& e = tape.value(out);

  REQUIRE(trained.embeddings.n_rows == e.rows);
  REQUIRE(trained.embeddings.dim == e.cols);
  CHECK(trained.embeddings.values == e.v);  // bitwise
}

TEST_CASE("zero-epoch sage training returns the initial forward pass") {
  const auto g = two_cliques(4);
  WalkParams wp;
  wp.walks_per_node = 2;
  wp.max_len = 6;
  const auto corpus = generate_walks(g, wp);
  GnnParams params;
  params.hidden_dim = 4;
  params.out_dim = 4;
  params.feature_dim = 4;
  params.epochs = 0;
  const auto trained = train_gnn(g, corpus, params, GnnVariant::sage_mean);
  CHECK(trained.epoch_loss.empty());

  const GnnModel model = init_gnn_model(g, params, GnnVariant::sage_mean);
  const auto manual = gnn_embed(g, model, params, params.seed);
  CHECK(trained.embeddings.values == manual.values);
}

TEST_CASE("output rows are unit length") {
  const auto g = two_cliques(4);
  WalkParams wp;
  wp.walks_per_node = 2;
  wp.max_len = 8;
  const auto corpus = generate_walks(g, wp);
  GnnParams params;
  params.hidden_dim = 4;
  params.out_dim = 6;
  params.feature_dim = 4;
  params.epochs = 1;
  params.pairs_per_epoch = 64;
  const auto r = train_gnn(g, corpus, params, GnnVariant::sage_mean);
  for (int i = 0; i < r.embeddings.n_rows; ++i) {
    double norm = 0.0;
    for (int d = 0; d < r.embeddings.dim; ++d) {
      norm += r.embeddings.row(i)[d] * r.embeddings.row(i)[d];
    }
    CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("sage training separates the two-clique fixture") {
  const auto g = two_cliques(4);
  WalkParams wp;
  wp.walks_per_node = 8;
  wp.max_len = 12;
  const auto corpus = generate_walks(g, wp);
  GnnParams params;
  params.hidden_dim = 8;
  params.out_dim = 8;
  params.feature_dim = 8;
  params.epochs = 25;
  params.pairs_per_epoch = 400;
  params.learning_rate = 0.05;
  const auto r = train_gnn(g, corpus, params, GnnVariant::sage_mean);

  double intra = 0.0, inter = 0.0;
  int n_intra = 0, n_inter = 0;
  for (int i = 0; i < 8; ++i) {
    for (int j = i + 1; j < 8; ++j) {
      const double c = cosine(r.embeddings.row(i), r.embeddings.row(j), 8);
      if ((i < 4) == (j < 4)) {
        intra += c;
        ++n_intra;
      } else {
        inter += c;
        ++n_inter;
      }
    }
  }
  CHECK(intra / n_intra > inter / n_inter);
  CHECK(r.epoch_loss.back() < r.epoch_loss.front());
  for (double l : r.epoch_loss) CHECK(std::isfinite(l));
}

TEST_CASE("cluster-gcn training separates the two-clique fixture") {
  const auto g = two_cliques(4);
  WalkParams wp;
  wp.walks_per_node = 8;
  wp.max_len = 12;
  const auto corpus = generate_walks(g, wp);
  GnnParams params;
  params.hidden_dim = 8;
  params.out_dim = 8;
  params.feature_dim = 8;
  params.epochs = 150;
  params.n_partitions = 2;
  params.pairs_per_partition = 24;
  params.learning_rate = 0.05;
  const auto r = train_gnn(g, corpus, params, GnnVariant::cluster_gcn);

  double intra = 0.0, inter = 0.0;
  int n_intra = 0, n_inter = 0;
  for (int i = 0; i < 8; ++i) {
    for (int j = i + 1; j < 8; ++j) {
      const double c = cosine(r.embeddings.row(i), r.embeddings.row(j), 8);
      if ((i < 4) == (j < 4)) {
        intra += c;
        ++n_intra;
      } else {
        inter += c;
        ++n_inter;
      }
    }
  }
  CHECK(intra / n_intra > inter / n_inter);
  CHECK(r.epoch_loss.back() < r.epoch_loss.front());
}

TEST_CASE("training is deterministic per seed") {
  const auto g = two_cliques(4);
  WalkParams wp;
  wp.walks_per_node = 3;
  wp.max_len = 8;
  const auto corpus = generate_walks(g, wp);
  GnnParams params;
  params.hidden_dim = 4;
  params.out_dim = 4;
  params.feature_dim = 4;
  params.epochs = 3;
  params.pairs_per_epoch = 64;
  params.seed = 5;

  for (auto variant : {GnnVariant::sage_mean, GnnVariant::cluster_gcn}) {
    GnnParams p = params;
    if (variant == GnnVariant::cluster_gcn) {
      p.n_partitions = 2;
      p.epochs = 10;
    }
    const auto a = train_gnn(g, corpus, p, variant);
    const auto b = train_gnn(g, corpus, p, variant);
    CHECK(a.embeddings.values == b.embeddings.values);
    p.seed = 6;
    const auto c = train_gnn(g, corpus, p, variant);
    CHECK(a.embeddings.values != c.embeddings.values);
  }
}

TEST_CASE("degree features allow embedding nodes unseen in training") {
  const auto g = two_cliques(4);
  WalkParams wp;
  wp.walks_per_node = 3;
  wp.max_len = 8;
  const auto corpus = generate_walks(g, wp);
  GnnParams params;
  params.hidden_dim = 4;
  params.out_dim = 4;
  params.feature_mode = FeatureMode::degree_features;
  params.epochs = 2;
  params.pairs_per_epoch = 64;
  const auto trained = train_gnn(g, corpus, params, GnnVariant::sage_mean);

  // Same graph plus a new node attached to the first clique.
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId i = 0; i < 8; ++i) {
    for (NodeId j : g.out_adj[static_cast<std::size_t>(i)]) {
      edges.emplace_back(i, j);
    }
  }
  edges.emplace_back(8, 0);
  edges.emplace_back(0, 8);
  edges.emplace_back(8, 1);
  const auto extended = graph_from_edges(9, edges);

  const auto emb = gnn_embed(extended, trained.model, params, 99);
  REQUIRE(emb.n_rows == 9);
  double norm = 0.0;
  for (int d = 0; d < emb.dim; ++d) {
    CHECK(std::isfinite(emb.row(8)[d]));
    norm += emb.row(8)[d] * emb.row(8)[d];
  }
  CHECK(norm > 0.0);
}

TEST_CASE("lookup features refuse inductive embedding") {
  const auto g = two_cliques(3);
  GnnParams params;
  params.hidden_dim = 4;
  params.out_dim = 4;
  params.feature_dim = 4;
  const GnnModel model = init_gnn_model(g, params, GnnVariant::sage_mean);
  const auto bigger = two_cliques(4);
  CHECK_THROWS_AS(gnn_embed(bigger, model, params, 1), std::invalid_argument);
}

TEST_CASE("empty corpus is rejected") {
  const auto g = two_cliques(3);
  WalkCorpus corpus;
  corpus.n_nodes = g.n_nodes();
  GnnParams params;
  CHECK_THROWS_AS(train_gnn(g, corpus, params, GnnVariant::sage_mean),
                  std::invalid_argument);
}

TEST_CASE("tape sparse product matches a dense multiply") {
  const auto g = random_graph(7, 0.35, 13);
  const auto a = gcn_normalize(g);
  Tensor x(7, 3);
  Rng rng(3);
  for (auto& v : x.v) v = rng.range(-1.0, 1.0);

  Tape tape;
  const int xid = tape.leaf(x);
  const int y = tape.spmm(&a, xid);
  const Tensor& out = tape.value(y);

  for (int i = 0; i < 7; ++i) {
    for (int c = 0; c < 3; ++c) {
      double expect = 0.0;
      for (int e = a.row_ptr[i]; e < a.row_ptr[i + 1]; ++e) {
        expect += a.val[e] * x.at(a.col_idx[e], c);
      }
      CHECK(out.at(i, c) == doctest::Approx(expect).epsilon(1e-14));
    }
  }
}

TEST_CASE("row normalization passes zero rows through and backprops identity") {
  Tensor x(2, 3);
  x.at(0, 0) = 3.0;
  x.at(0, 1) = 4.0;  // norm 5
  // row 1 stays zero
  Tape tape;
  const int xid = tape.leaf(x);
  const int y = tape.l2norm_rows(xid);
  const Tensor& out = tape.value(y);
  CHECK(out.at(0, 0) == doctest::Approx(0.6));
  CHECK(out.at(0, 1) == doctest::Approx(0.8));
  CHECK(out.at(1, 0) == 0.0);
  CHECK(out.at(1, 2) == 0.0);

  Tensor& g = tape.grad(y);
  g.at(1, 0) = 0.7;
  g.at(1, 2) = -0.2;
  tape.backward();
  const Tensor& gx = tape.grad(xid);
  CHECK(gx.at(1, 0) == doctest::Approx(0.7));  // identity on the zero row
  CHECK(gx.at(1, 2) == doctest::Approx(-0.2));
}

}  // TEST_SUITE
