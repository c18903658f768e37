#pragma once

// Inductive graph neural network embeddings: a two-layer mean-aggregator
// network (sage_mean) and a cluster-partitioned graph convolution network
// (cluster_gcn), both trained against the same walk-proximity objective as
// the skip-gram embedder so the three methods differ only in the encoder.
//
// Gradients come from a minimal reverse-mode tape (Tape below): forward ops
// record themselves, backward() replays them in reverse. The tape exists so
// every analytic gradient can be checked against finite differences.

#include <array>
#include <cstdint>
#include <vector>

#include "echograph/embedding.hpp"
#include "echograph/graph.hpp"
#include "echograph/walks.hpp"

namespace echograph {

// ---------------------------------------------------------------------------
// Dense row-major matrix + fixed sparse matrix (CSR) used by the tape.

struct Tensor {
  int rows = 0;
  int cols = 0;
  std::vector<double> v;  // row-major, rows * cols

  Tensor() = default;
  Tensor(int r, int c)
      : rows(r), cols(c),
        v(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0.0) {}

  double& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const {
    return v[static_cast<std::size_t>(r) * cols + c];
  }
  double* row(int r) { return v.data() + static_cast<std::size_t>(r) * cols; }
  const double* row(int r) const {
    return v.data() + static_cast<std::size_t>(r) * cols;
  }
};

struct CsrMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr;  // rows + 1
  std::vector<int> col_idx;
  std::vector<double> val;
};

// ---------------------------------------------------------------------------
// Reverse-mode tape.
//
// Usage: add leaves (parameters / inputs), compose ops, fill grad(output)
// with dLoss/dOutput, call backward(), read grad(leaf). Node ids are dense
// ints; the tape owns all values and gradients.

class Tape {
 public:
  int leaf(Tensor value);

  // y[i] = x[rows[i]]; backward scatter-adds into x.
  int gather_rows(int x, std::vector<int> rows);
  // Group g = rows [offsets[g], offsets[g+1]) of x, averaged; empty group
  // yields a zero row (an isolated node's neighbor term).
  int group_mean(int x, std::vector<int> offsets);
  // y = a * x with a fixed (not differentiated); a is borrowed and must
  // outlive the tape.
  int spmm(const CsrMatrix* a, int x);
  int matmul(int x, int w);
  // y = x + 1 b^T, b is 1 x cols.
  int add_bias(int x, int b);
  int add(int a, int b);
  int relu(int x);
  // Rows scaled to unit L2 norm; rows with norm < 1e-12 pass through
  // unchanged (and backward treats them as identity).
  int l2norm_rows(int x);

  const Tensor& value(int id) const { return nodes_[id].value; }
  // Gradient accumulator, zero-initialized to the node's shape on first use.
  Tensor& grad(int id);
  void backward();

 private:
  enum class Op { leaf, gather_rows, group_mean, spmm, matmul, add_bias, add,
                  relu, l2norm_rows };
  struct Node {
    Op op;
    Tensor value;
    Tensor grad;
    bool grad_live = false;
    int in0 = -1, in1 = -1;
    std::vector<int> indices;      // gather rows / group offsets
    const CsrMatrix* sparse = nullptr;
    std::vector<double> row_norms; // saved by l2norm_rows
  };
  int push(Node node);
  std::vector<Node> nodes_;
};

// ---------------------------------------------------------------------------
// Configuration.

enum class GnnVariant { sage_mean, cluster_gcn };

enum class FeatureMode { trainable_lookup, degree_features };

struct GnnParams {
  int hidden_dim = 16;
  int out_dim = 100;
  int epochs = 30;                      // use 1000 for cluster_gcn
  std::array<int, 2> neighbor_samples = {25, 10};  // sage_mean fanout per layer
  int n_partitions = 20;                // cluster_gcn
  int partitions_per_batch = 2;         // cluster_gcn partitions per step
  FeatureMode feature_mode = FeatureMode::trainable_lookup;
  int feature_dim = 16;
  double learning_rate = 0.01;          // Adam step size
  int window = 10;                      // positive-pair window over walks
  int negatives_per_pair = 5;
  int pairs_per_epoch = 0;              // 0 = 10 * n_nodes (sage_mean)
  int batch_pairs = 256;                // sage_mean minibatch
  int pairs_per_partition = 32;         // cluster_gcn, per partition per epoch
  std::uint64_t seed = 1;
};

// ---------------------------------------------------------------------------
// Building blocks (also exercised directly by tests).

// nonlinearity(W_self * self + W_nbr * mean(neighbors) + b); an empty
// neighbor list contributes a zero mean term. apply_relu=false gives the
// identity nonlinearity. Throws std::invalid_argument on dimension mismatch.
std::vector<double> mean_aggregate(const std::vector<double>& self,
                                   const std::vector<std::vector<double>>& neighbors,
                                   const Tensor& w_self, const Tensor& w_nbr,
                                   const std::vector<double>& bias,
                                   bool apply_relu);

// D^{-1/2} (A + I) D^{-1/2} over the symmetrized edge set of g, with D the
// degree matrix of A + I. Rows are CSR-indexable; the matrix is symmetric.
CsrMatrix gcn_normalize(const DirectedGraph& g);

// Label propagation over the symmetrized graph followed by balanced
// bin-packing of the resulting communities (largest first, fullest-last bin,
// communities split into chunks of at most ceil(n / k) when oversized).
// Every node gets exactly one partition in [0, k); sizes stay within twice
// the balanced size. Throws std::invalid_argument if k < 1 or k > n.
std::vector<int> partition_graph(const DirectedGraph& g, int n_partitions,
                                 std::uint64_t seed);

// Per-node input features for the GNNs. trainable_lookup rows start uniform
// in [-0.1, 0.1] and receive gradients during training; degree_features are
// fixed functions of in/out degree (usable for nodes unseen in training).
Tensor initial_features(const DirectedGraph& g, const GnnParams& params);

// ---------------------------------------------------------------------------
// Model parameters, exposed so tests can run finite-difference checks and
// forward passes with handcrafted weights.

struct GnnModel {
  GnnVariant variant = GnnVariant::sage_mean;
  Tensor features;           // n x feature_dim (trainable in lookup mode)
  Tensor w1_self, w1_nbr;    // sage layer 1
  Tensor w2_self, w2_nbr;    // sage layer 2 (linear)
  Tensor w1, w2;             // gcn layers
  Tensor b1, b2;             // 1 x dim biases (shared naming across variants)
};

// Deterministic initialization (uniform scaled by fan-in) from seed.
GnnModel init_gnn_model(const DirectedGraph& g, const GnnParams& params,
                        GnnVariant variant);

// Pointers to the tensors train_gnn updates, in a fixed order matching
// GnnTapeIds::all(). Lookup features are trainable; degree features are not.
std::vector<Tensor*> gnn_param_ptrs(GnnModel& model, GnnVariant variant,
                                    FeatureMode mode);

// Union of out- and in-neighbors per node (edges treated as undirected),
// each list sorted. The traversal set for sampling and partitioning.
std::vector<std::vector<NodeId>> symmetrized_adjacency(const DirectedGraph& g);

// The sampled computation graph for one sage_mean forward: fixing a plan
// makes the forward a deterministic function of the parameters, which is
// what finite-difference checks and bit-reproducibility need.
struct SagePlan {
  std::vector<NodeId> frontier0;  // nodes whose raw features are gathered
  std::vector<NodeId> frontier1;  // nodes given layer-1 representations
  std::vector<NodeId> targets;    // nodes given final embeddings
  std::vector<int> self1;         // frontier1 -> index into frontier0
  std::vector<int> nbr1;          // concatenated neighbor indices into frontier0
  std::vector<int> nbr1_off;      // frontier1-aligned offsets into nbr1
  std::vector<int> self2;         // targets -> index into frontier1
  std::vector<int> nbr2;          // neighbor indices into frontier1
  std::vector<int> nbr2_off;
};

class Rng;  // from rng.hpp

// Samples neighborhoods for `targets` over the symmetrized edge set: fanout
// from neighbor_samples, without replacement when enough neighbors exist,
// cyclic repetition when a node has fewer (every neighbor used at least
// once, deterministically), nothing when it has none.
SagePlan build_sage_plan(const std::vector<std::vector<NodeId>>& adjacency,
                         const std::vector<NodeId>& targets,
                         const std::array<int, 2>& fanouts, Rng& rng);
SagePlan build_sage_plan(const DirectedGraph& g,
                         const std::vector<NodeId>& targets,
                         const std::array<int, 2>& fanouts, Rng& rng);

// Tape ids of the staged model parameters; -1 where the variant lacks the
// tensor. Gradients are read back from these ids after backward().
struct GnnTapeIds {
  int features = -1;
  int w1_self = -1, w1_nbr = -1;
  int w2_self = -1, w2_nbr = -1;
  int w1 = -1, w2 = -1;
  int b1 = -1, b2 = -1;
  // Existing ids in the same order as gnn_param_ptrs.
  std::vector<int> all() const;
};

GnnTapeIds stage_params(Tape& tape, const GnnModel& model, GnnVariant variant);

// Runs the two aggregate layers + linear output + row normalization on the
// tape; returns the id of the normalized output (|plan.targets| x out_dim).
int sage_forward(Tape& tape, const SagePlan& plan, const GnnTapeIds& ids);

// Two graph-convolution layers (ReLU then linear) over the diagonally
// enhanced propagation operator (a_hat + I), with a_hat covering `nodes`
// (a_hat dimension == nodes.size()), followed by row normalization. Feature
// rows for `nodes` are gathered from ids.features.
int gcn_forward(Tape& tape, const CsrMatrix& a_hat, const GnnTapeIds& ids,
                const std::vector<NodeId>& nodes);

// ---------------------------------------------------------------------------
// Training and inference.

struct GnnTrainResult {
  EmbeddingMatrix embeddings;      // n x out_dim, rows L2-normalized
  std::vector<double> epoch_loss;  // mean sampled pair loss per epoch
  GnnModel model;                  // final parameters (for inductive reuse)
};

// Unsupervised training: positives are co-occurring walk pairs within
// `window`, negatives are drawn from the unigram^0.75 node distribution of
// the corpus, the loss is the same skip-gram negative-sampling objective as
// the shallow embedder, applied to the network's normalized outputs.
// Deterministic given (g, corpus, params). Throws std::invalid_argument on
// an empty corpus or parameter violations.
GnnTrainResult train_gnn(const DirectedGraph& g, const WalkCorpus& corpus,
                         const GnnParams& params, GnnVariant variant);

// Forward-only embeddings from an existing model (inductive path: g may
// contain nodes unseen in training when degree_features mode is used).
EmbeddingMatrix gnn_embed(const DirectedGraph& g, const GnnModel& model,
                          const GnnParams& params, std::uint64_t sample_seed);

}  // namespace echograph
