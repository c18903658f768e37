#include "echograph/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "echograph/rng.hpp"
#include "echograph/skipgram.hpp"

namespace echograph {

namespace {

constexpr std::uint64_t kInitStream = 0x474e4e49ULL;   // model weights
constexpr std::uint64_t kFeatStream = 0x474e4e46ULL;   // lookup features
constexpr std::uint64_t kEpochStream = 0x474e4e45ULL;  // per-epoch sampling
constexpr std::uint64_t kEmbedStream = 0x474e4d42ULL;  // inference sampling
constexpr std::uint64_t kPartStream = 0x50415254ULL;   // label propagation

void check(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

// ---------------------------------------------------------------------------
// Tape

int Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size()) - 1;
}

int Tape::leaf(Tensor value) {
  Node n;
  n.op = Op::leaf;
  n.value = std::move(value);
  return push(std::move(n));
}

int Tape::gather_rows(int x, std::vector<int> rows) {
  const Tensor& src = nodes_[x].value;
  Node n;
  n.op = Op::gather_rows;
  n.in0 = x;
  n.value = Tensor(static_cast<int>(rows.size()), src.cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int r = rows[i];
    if (r < 0 || r >= src.rows) {
      throw std::invalid_argument("tape: gather row index out of range");
    }
    std::copy(src.row(r), src.row(r) + src.cols,
              n.value.row(static_cast<int>(i)));
  }
  n.indices = std::move(rows);
  return push(std::move(n));
}

int Tape::group_mean(int x, std::vector<int> offsets) {
  const Tensor& src = nodes_[x].value;
  const int groups = static_cast<int>(offsets.size()) - 1;
  Node n;
  n.op = Op::group_mean;
  n.in0 = x;
  n.value = Tensor(groups, src.cols);
  for (int g = 0; g < groups; ++g) {
    const int lo = offsets[g], hi = offsets[g + 1];
    if (hi <= lo) continue;  // empty neighborhood -> zero row
    double* out = n.value.row(g);
    for (int r = lo; r < hi; ++r) {
      const double* in = src.row(r);
      for (int c = 0; c < src.cols; ++c) out[c] += in[c];
    }
    const double inv = 1.0 / (hi - lo);
    for (int c = 0; c < src.cols; ++c) out[c] *= inv;
  }
  n.indices = std::move(offsets);
  return push(std::move(n));
}

int Tape::spmm(const CsrMatrix* a, int x) {
  const Tensor& src = nodes_[x].value;
  check(a->cols == src.rows, "spmm: dimension mismatch");
  Node n;
  n.op = Op::spmm;
  n.in0 = x;
  n.sparse = a;
  n.value = Tensor(a->rows, src.cols);
  for (int i = 0; i < a->rows; ++i) {
    double* out = n.value.row(i);
    for (int e = a->row_ptr[i]; e < a->row_ptr[i + 1]; ++e) {
      const double w = a->val[e];
      const double* in = src.row(a->col_idx[e]);
      for (int c = 0; c < src.cols; ++c) out[c] += w * in[c];
    }
  }
  return push(std::move(n));
}

int Tape::matmul(int x, int w) {
  const Tensor& a = nodes_[x].value;
  const Tensor& b = nodes_[w].value;
  check(a.cols == b.rows, "matmul: dimension mismatch");
  Node n;
  n.op = Op::matmul;
  n.in0 = x;
  n.in1 = w;
  n.value = Tensor(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    const double* ar = a.row(i);
    double* out = n.value.row(i);
    for (int k = 0; k < a.cols; ++k) {
      const double av = ar[k];
      if (av == 0.0) continue;
      const double* br = b.row(k);
      for (int j = 0; j < b.cols; ++j) out[j] += av * br[j];
    }
  }
  return push(std::move(n));
}

int Tape::add_bias(int x, int b) {
  const Tensor& a = nodes_[x].value;
  const Tensor& bias = nodes_[b].value;
  check(bias.rows == 1 && bias.cols == a.cols, "add_bias: shape mismatch");
  Node n;
  n.op = Op::add_bias;
  n.in0 = x;
  n.in1 = b;
  n.value = a;
  for (int i = 0; i < a.rows; ++i) {
    double* out = n.value.row(i);
    for (int c = 0; c < a.cols; ++c) out[c] += bias.v[c];
  }
  return push(std::move(n));
}

int Tape::add(int a, int b) {
  const Tensor& x = nodes_[a].value;
  const Tensor& y = nodes_[b].value;
  check(x.rows == y.rows && x.cols == y.cols, "add: shape mismatch");
  Node n;
  n.op = Op::add;
  n.in0 = a;
  n.in1 = b;
  n.value = x;
  for (std::size_t i = 0; i < n.value.v.size(); ++i) n.value.v[i] += y.v[i];
  return push(std::move(n));
}

int Tape::relu(int x) {
  Node n;
  n.op = Op::relu;
  n.in0 = x;
  n.value = nodes_[x].value;
  for (double& v : n.value.v) v = std::max(v, 0.0);
  return push(std::move(n));
}

int Tape::l2norm_rows(int x) {
  const Tensor& src = nodes_[x].value;
  Node n;
  n.op = Op::l2norm_rows;
  n.in0 = x;
  n.value = src;
  n.row_norms.resize(static_cast<std::size_t>(src.rows));
  for (int i = 0; i < src.rows; ++i) {
    double s = 0.0;
    const double* in = src.row(i);
    for (int c = 0; c < src.cols; ++c) s += in[c] * in[c];
    const double norm = std::sqrt(s);
    n.row_norms[static_cast<std::size_t>(i)] = norm;
    if (norm >= 1e-12) {
      double* out = n.value.row(i);
      for (int c = 0; c < src.cols; ++c) out[c] /= norm;
    }
  }
  return push(std::move(n));
}

Tensor& Tape::grad(int id) {
  Node& n = nodes_[id];
  if (!n.grad_live) {
    n.grad = Tensor(n.value.rows, n.value.cols);
    n.grad_live = true;
  }
  return n.grad;
}

void Tape::backward() {
  for (int id = static_cast<int>(nodes_.size()) - 1; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.grad_live || n.op == Op::leaf) continue;
    const Tensor& g = n.grad;
    switch (n.op) {
      case Op::gather_rows: {
        Tensor& gx = grad(n.in0);
        for (std::size_t i = 0; i < n.indices.size(); ++i) {
          double* dst = gx.row(n.indices[i]);
          const double* src = g.row(static_cast<int>(i));
          for (int c = 0; c < g.cols; ++c) dst[c] += src[c];
        }
        break;
      }
      case Op::group_mean: {
        Tensor& gx = grad(n.in0);
        const int groups = g.rows;
        for (int grp = 0; grp < groups; ++grp) {
          const int lo = n.indices[grp], hi = n.indices[grp + 1];
          if (hi <= lo) continue;
          const double inv = 1.0 / (hi - lo);
          const double* src = g.row(grp);
          for (int r = lo; r < hi; ++r) {
            double* dst = gx.row(r);
            for (int c = 0; c < g.cols; ++c) dst[c] += inv * src[c];
          }
        }
        break;
      }
      case Op::spmm: {
        Tensor& gx = grad(n.in0);
        const CsrMatrix* a = n.sparse;
        for (int i = 0; i < a->rows; ++i) {
          const double* src = g.row(i);
          for (int e = a->row_ptr[i]; e < a->row_ptr[i + 1]; ++e) {
            const double w = a->val[e];
            double* dst = gx.row(a->col_idx[e]);
            for (int c = 0; c < g.cols; ++c) dst[c] += w * src[c];
          }
        }
        break;
      }
      case Op::matmul: {
        const Tensor& x = nodes_[n.in0].value;
        const Tensor& w = nodes_[n.in1].value;
        Tensor& gx = grad(n.in0);
        Tensor& gw = grad(n.in1);
        // gx += g . w^T
        for (int i = 0; i < x.rows; ++i) {
          const double* gr = g.row(i);
          double* dst = gx.row(i);
          for (int k = 0; k < w.rows; ++k) {
            const double* wr = w.row(k);
            double s = 0.0;
            for (int j = 0; j < w.cols; ++j) s += gr[j] * wr[j];
            dst[k] += s;
          }
        }
        // gw += x^T . g
        for (int i = 0; i < x.rows; ++i) {
          const double* xr = x.row(i);
          const double* gr = g.row(i);
          for (int k = 0; k < x.cols; ++k) {
            const double xv = xr[k];
            if (xv == 0.0) continue;
            double* dst = gw.row(k);
            for (int j = 0; j < g.cols; ++j) dst[j] += xv * gr[j];
          }
        }
        break;
      }
      case Op::add_bias: {
        Tensor& gx = grad(n.in0);
        Tensor& gb = grad(n.in1);
        for (std::size_t i = 0; i < g.v.size(); ++i) gx.v[i] += g.v[i];
        for (int i = 0; i < g.rows; ++i) {
          const double* src = g.row(i);
          for (int c = 0; c < g.cols; ++c) gb.v[c] += src[c];
        }
        break;
      }
      case Op::add: {
        Tensor& ga = grad(n.in0);
        Tensor& gb = grad(n.in1);
        for (std::size_t i = 0; i < g.v.size(); ++i) {
          ga.v[i] += g.v[i];
          gb.v[i] += g.v[i];
        }
        break;
      }
      case Op::relu: {
        const Tensor& x = nodes_[n.in0].value;
        Tensor& gx = grad(n.in0);
        for (std::size_t i = 0; i < g.v.size(); ++i) {
          if (x.v[i] > 0.0) gx.v[i] += g.v[i];
        }
        break;
      }
      case Op::l2norm_rows: {
        Tensor& gx = grad(n.in0);
        for (int i = 0; i < g.rows; ++i) {
          const double norm = n.row_norms[static_cast<std::size_t>(i)];
          const double* gr = g.row(i);
          double* dst = gx.row(i);
          if (norm < 1e-12) {
            for (int c = 0; c < g.cols; ++c) dst[c] += gr[c];
            continue;
          }
          const double* y = n.value.row(i);
          double dot = 0.0;
          for (int c = 0; c < g.cols; ++c) dot += gr[c] * y[c];
          const double inv = 1.0 / norm;
          for (int c = 0; c < g.cols; ++c) {
            dst[c] += (gr[c] - dot * y[c]) * inv;
          }
        }
        break;
      }
      case Op::leaf:
        break;
    }
  }
}

// ---------------------------------------------------------------------------
// Building blocks

std::vector<double> mean_aggregate(
    const std::vector<double>& self,
    const std::vector<std::vector<double>>& neighbors, const Tensor& w_self,
    const Tensor& w_nbr, const std::vector<double>& bias, bool apply_relu) {
  const int d = static_cast<int>(self.size());
  check(w_self.rows == d && w_nbr.rows == d, "mean_aggregate: weight rows");
  check(w_self.cols == w_nbr.cols, "mean_aggregate: weight cols");
  const int out_dim = w_self.cols;
  check(static_cast<int>(bias.size()) == out_dim, "mean_aggregate: bias size");
  for (const auto& nb : neighbors) {
    check(static_cast<int>(nb.size()) == d, "mean_aggregate: neighbor dim");
  }

  std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
  if (!neighbors.empty()) {
    for (const auto& nb : neighbors) {
      for (int c = 0; c < d; ++c) mean[static_cast<std::size_t>(c)] += nb[c];
    }
    for (double& v : mean) v /= static_cast<double>(neighbors.size());
  }

  std::vector<double> out(bias);
  for (int k = 0; k < d; ++k) {
    const double sv = self[static_cast<std::size_t>(k)];
    const double mv = mean[static_cast<std::size_t>(k)];
    for (int j = 0; j < out_dim; ++j) {
      out[static_cast<std::size_t>(j)] += sv * w_self.at(k, j) + mv * w_nbr.at(k, j);
    }
  }
  if (apply_relu) {
    for (double& v : out) v = std::max(v, 0.0);
  }
  return out;
}

std::vector<std::vector<NodeId>> symmetrized_adjacency(const DirectedGraph& g) {
  const NodeId n = g.n_nodes();
  std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(n));
  for (NodeId u = 0; u < n; ++u) {
    const auto& out = g.out_adj[static_cast<std::size_t>(u)];
    const auto& in = g.in_adj[static_cast<std::size_t>(u)];
    auto& row = adj[static_cast<std::size_t>(u)];
    row.resize(out.size() + in.size());
    auto end = std::set_union(out.begin(), out.end(), in.begin(), in.end(),
                              row.begin());
    row.erase(end, row.end());
  }
  return adj;
}

CsrMatrix gcn_normalize(const DirectedGraph& g) {
  const auto adj = symmetrized_adjacency(g);
  const int n = static_cast<int>(adj.size());
  std::vector<double> inv_sqrt_deg(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Degree of A + I: undirected neighbors plus the self loop.
    inv_sqrt_deg[static_cast<std::size_t>(i)] =
        1.0 / std::sqrt(static_cast<double>(adj[static_cast<std::size_t>(i)].size() + 1));
  }
  CsrMatrix m;
  m.rows = n;
  m.cols = n;
  m.row_ptr.resize(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i) {
    m.row_ptr[static_cast<std::size_t>(i) + 1] =
        m.row_ptr[static_cast<std::size_t>(i)] +
        static_cast<int>(adj[static_cast<std::size_t>(i)].size()) + 1;
  }
  m.col_idx.resize(static_cast<std::size_t>(m.row_ptr.back()));
  m.val.resize(m.col_idx.size());
  for (int i = 0; i < n; ++i) {
    int e = m.row_ptr[static_cast<std::size_t>(i)];
    bool self_done = false;
    const double di = inv_sqrt_deg[static_cast<std::size_t>(i)];
    auto emit = [&](int j) {
      m.col_idx[static_cast<std::size_t>(e)] = j;
      m.val[static_cast<std::size_t>(e)] =
          di * inv_sqrt_deg[static_cast<std::size_t>(j)];
      ++e;
    };
    for (NodeId j : adj[static_cast<std::size_t>(i)]) {
      if (!self_done && j > i) {
        emit(i);
        self_done = true;
      }
      emit(j);
    }
    if (!self_done) emit(i);
  }
  return m;
}

std::vector<int> partition_graph(const DirectedGraph& g, int n_partitions,
                                 std::uint64_t seed) {
  const int n = g.n_nodes();
  check(n_partitions >= 1, "partition_graph: n_partitions < 1");
  check(n_partitions <= n, "partition_graph: more partitions than nodes");

  const auto adj = symmetrized_adjacency(g);

  // Label propagation: nodes repeatedly adopt the most frequent label among
  // neighbors (ties -> smallest label) until stable.
  std::vector<int> label(static_cast<std::size_t>(n));
  std::iota(label.begin(), label.end(), 0);
  std::vector<int> order(label);
  Rng rng(hash_seed(seed, kPartStream));
  std::vector<int> nbr_labels;
  for (int iter = 0; iter < 50; ++iter) {
    rng.shuffle(order);
    bool changed = false;
    for (int u : order) {
      const auto& nbrs = adj[static_cast<std::size_t>(u)];
      if (nbrs.empty()) continue;
      nbr_labels.clear();
      for (NodeId v : nbrs) nbr_labels.push_back(label[static_cast<std::size_t>(v)]);
      std::sort(nbr_labels.begin(), nbr_labels.end());
      int best = nbr_labels[0], best_count = 0;
      for (std::size_t i = 0; i < nbr_labels.size();) {
        std::size_t j = i;
        while (j < nbr_labels.size() && nbr_labels[j] == nbr_labels[i]) ++j;
        if (static_cast<int>(j - i) > best_count) {
          best_count = static_cast<int>(j - i);
          best = nbr_labels[i];
        }
        i = j;
      }
      if (best != label[static_cast<std::size_t>(u)]) {
        label[static_cast<std::size_t>(u)] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }

  // Communities in node-id order within each label group.
  std::map<int, std::vector<int>> groups;
  for (int u = 0; u < n; ++u) groups[label[static_cast<std::size_t>(u)]].push_back(u);
  std::vector<std::vector<int>> communities;
  communities.reserve(groups.size());
  for (auto& [lab, members] : groups) communities.push_back(std::move(members));
  std::stable_sort(communities.begin(), communities.end(),
                   [](const auto& a, const auto& b) {
                     if (a.size() != b.size()) return a.size() > b.size();
                     return a.front() < b.front();
                   });

  // Oversized communities are split into consecutive chunks capped at the
  // balanced size, then chunks go largest-first onto the least-loaded bin.
  const int cap = (n + n_partitions - 1) / n_partitions;
  std::vector<std::vector<int>> chunks;
  for (const auto& comm : communities) {
    for (std::size_t s = 0; s < comm.size(); s += static_cast<std::size_t>(cap)) {
      const std::size_t e = std::min(comm.size(), s + static_cast<std::size_t>(cap));
      chunks.emplace_back(comm.begin() + static_cast<std::ptrdiff_t>(s),
                          comm.begin() + static_cast<std::ptrdiff_t>(e));
    }
  }
  std::stable_sort(chunks.begin(), chunks.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });

  std::vector<std::vector<int>> bins(static_cast<std::size_t>(n_partitions));
  for (auto& chunk : chunks) {
    std::size_t best = 0;
    for (std::size_t b = 1; b < bins.size(); ++b) {
      if (bins[b].size() < bins[best].size()) best = b;
    }
    bins[best].insert(bins[best].end(), chunk.begin(), chunk.end());
  }

  // No partition may end up empty (every bin must be trainable); siphon the
  // tail halves of the largest bins into empty ones.
  for (;;) {
    int empty = -1, largest = 0;
    for (std::size_t b = 0; b < bins.size(); ++b) {
      if (bins[b].empty() && empty < 0) empty = static_cast<int>(b);
      if (bins[b].size() > bins[static_cast<std::size_t>(largest)].size()) {
        largest = static_cast<int>(b);
      }
    }
    if (empty < 0) break;
    auto& src = bins[static_cast<std::size_t>(largest)];
    auto& dst = bins[static_cast<std::size_t>(empty)];
    const std::size_t take = src.size() / 2;
    dst.insert(dst.end(), src.end() - static_cast<std::ptrdiff_t>(take), src.end());
    src.erase(src.end() - static_cast<std::ptrdiff_t>(take), src.end());
  }

  std::vector<int> part(static_cast<std::size_t>(n), -1);
  for (std::size_t b = 0; b < bins.size(); ++b) {
    for (int u : bins[b]) part[static_cast<std::size_t>(u)] = static_cast<int>(b);
  }
  return part;
}

Tensor initial_features(const DirectedGraph& g, const GnnParams& params) {
  const int n = g.n_nodes();
  const int d = params.feature_dim;
  check(d >= 1, "initial_features: feature_dim < 1");
  Tensor f(n, d);
  if (params.feature_mode == FeatureMode::trainable_lookup) {
    Rng rng(hash_seed(params.seed, kFeatStream));
    for (double& v : f.v) v = rng.range(-0.1, 0.1);
    return f;
  }
  // Degree features: fixed functions of connectivity so unseen nodes can be
  // featurized at inference time. Layout: bias, log-degrees, then a one-hot
  // log2 bucket of total degree in the remaining slots.
  for (int i = 0; i < n; ++i) {
    const auto out_deg = static_cast<double>(g.out_adj[static_cast<std::size_t>(i)].size());
    const auto in_deg = static_cast<double>(g.in_adj[static_cast<std::size_t>(i)].size());
    double* row = f.row(i);
    row[0] = 1.0;
    if (d > 1) row[1] = std::log1p(out_deg) / 10.0;
    if (d > 2) row[2] = std::log1p(in_deg) / 10.0;
    if (d > 3) row[3] = std::log1p(out_deg + in_deg) / 10.0;
    if (d > 4) {
      const int bucket = static_cast<int>(std::log2(1.0 + out_deg + in_deg));
      row[4 + std::min(bucket, d - 5)] = 1.0;
    }
  }
  return f;
}

namespace {

Tensor glorot(int rows, int cols, Rng& rng) {
  Tensor t(rows, cols);
  const double s = std::sqrt(6.0 / (rows + cols));
  for (double& v : t.v) v = rng.range(-s, s);
  return t;
}

}  // namespace

GnnModel init_gnn_model(const DirectedGraph& g, const GnnParams& params,
                        GnnVariant variant) {
  check(params.hidden_dim >= 1 && params.out_dim >= 1, "gnn: dims < 1");
  check(params.epochs >= 0, "gnn: epochs < 0");
  GnnModel m;
  m.variant = variant;
  m.features = initial_features(g, params);
  Rng rng(hash_seed(params.seed, kInitStream));
  const int d = params.feature_dim;
  const int h = params.hidden_dim;
  const int o = params.out_dim;
  if (variant == GnnVariant::sage_mean) {
    m.w1_self = glorot(d, h, rng);
    m.w1_nbr = glorot(d, h, rng);
    m.w2_self = glorot(h, o, rng);
    m.w2_nbr = glorot(h, o, rng);
  } else {
    m.w1 = glorot(d, h, rng);
    m.w2 = glorot(h, o, rng);
  }
  m.b1 = Tensor(1, h);
  m.b2 = Tensor(1, o);
  return m;
}

std::vector<Tensor*> gnn_param_ptrs(GnnModel& model, GnnVariant variant,
                                    FeatureMode mode) {
  std::vector<Tensor*> out;
  if (mode == FeatureMode::trainable_lookup) out.push_back(&model.features);
  if (variant == GnnVariant::sage_mean) {
    out.push_back(&model.w1_self);
    out.push_back(&model.w1_nbr);
    out.push_back(&model.b1);
    out.push_back(&model.w2_self);
    out.push_back(&model.w2_nbr);
    out.push_back(&model.b2);
  } else {
    out.push_back(&model.w1);
    out.push_back(&model.b1);
    out.push_back(&model.w2);
    out.push_back(&model.b2);
  }
  return out;
}

std::vector<int> GnnTapeIds::all() const {
  std::vector<int> out;
  for (int id : {features, w1_self, w1_nbr, b1, w2_self, w2_nbr, b2}) {
    if (id >= 0) out.push_back(id);
  }
  // gcn tensors (w1/w2) replace the sage ones; order must mirror
  // gnn_param_ptrs: features, w1, b1, w2, b2.
  if (w1 >= 0) {
    out.clear();
    if (features >= 0) out.push_back(features);
    out.push_back(w1);
    out.push_back(b1);
    out.push_back(w2);
    out.push_back(b2);
  }
  return out;
}

GnnTapeIds stage_params(Tape& tape, const GnnModel& model, GnnVariant variant) {
  GnnTapeIds ids;
  ids.features = tape.leaf(model.features);
  if (variant == GnnVariant::sage_mean) {
    ids.w1_self = tape.leaf(model.w1_self);
    ids.w1_nbr = tape.leaf(model.w1_nbr);
    ids.b1 = tape.leaf(model.b1);
    ids.w2_self = tape.leaf(model.w2_self);
    ids.w2_nbr = tape.leaf(model.w2_nbr);
    ids.b2 = tape.leaf(model.b2);
  } else {
    ids.w1 = tape.leaf(model.w1);
    ids.b1 = tape.leaf(model.b1);
    ids.w2 = tape.leaf(model.w2);
    ids.b2 = tape.leaf(model.b2);
  }
  return ids;
}

// ---------------------------------------------------------------------------
// Sampling plans

namespace {

// Fanout-bounded neighbor pick: all of them cyclically repeated up to k when
// the list is short, a k-subset without replacement when it is long.
void sample_neighbors(const std::vector<NodeId>& nbrs, int k, Rng& rng,
                      std::vector<NodeId>& out) {
  out.clear();
  if (nbrs.empty() || k <= 0) return;
  const int deg = static_cast<int>(nbrs.size());
  if (deg <= k) {
    out.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) out[static_cast<std::size_t>(i)] = nbrs[static_cast<std::size_t>(i % deg)];
    return;
  }
  std::vector<NodeId> pool(nbrs);
  for (int i = 0; i < k; ++i) {
    const std::size_t j = static_cast<std::size_t>(i) +
                          rng.index(pool.size() - static_cast<std::size_t>(i));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
  }
  out.assign(pool.begin(), pool.begin() + k);
}

struct NodeIndexer {
  std::vector<NodeId> order;
  std::unordered_map<NodeId, int> pos;
  int intern(NodeId u) {
    auto [it, fresh] = pos.try_emplace(u, static_cast<int>(order.size()));
    if (fresh) order.push_back(u);
    return it->second;
  }
};

}  // namespace

SagePlan build_sage_plan(const std::vector<std::vector<NodeId>>& adjacency,
                         const std::vector<NodeId>& targets,
                         const std::array<int, 2>& fanouts, Rng& rng) {
  SagePlan plan;
  plan.targets = targets;

  // Layer 2 (output layer) sampling: fanouts[1] neighbors per target.
  NodeIndexer f1;
  std::vector<std::vector<NodeId>> sampled2(targets.size());
  std::vector<NodeId> buf;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    f1.intern(targets[t]);
    sample_neighbors(adjacency[static_cast<std::size_t>(targets[t])],
                     fanouts[1], rng, buf);
    sampled2[t] = buf;
    for (NodeId v : buf) f1.intern(v);
  }
  plan.frontier1 = f1.order;

  // Layer 1 sampling: fanouts[0] neighbors per frontier node.
  NodeIndexer f0;
  std::vector<std::vector<NodeId>> sampled1(plan.frontier1.size());
  for (std::size_t i = 0; i < plan.frontier1.size(); ++i) {
    f0.intern(plan.frontier1[i]);
    sample_neighbors(adjacency[static_cast<std::size_t>(plan.frontier1[i])],
                     fanouts[0], rng, buf);
    sampled1[i] = buf;
    for (NodeId v : buf) f0.intern(v);
  }
  plan.frontier0 = f0.order;

  plan.self1.resize(plan.frontier1.size());
  plan.nbr1_off.assign(1, 0);
  for (std::size_t i = 0; i < plan.frontier1.size(); ++i) {
    plan.self1[i] = f0.pos.at(plan.frontier1[i]);
    for (NodeId v : sampled1[i]) plan.nbr1.push_back(f0.pos.at(v));
    plan.nbr1_off.push_back(static_cast<int>(plan.nbr1.size()));
  }
  plan.self2.resize(targets.size());
  plan.nbr2_off.assign(1, 0);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    plan.self2[t] = f1.pos.at(targets[t]);
    for (NodeId v : sampled2[t]) plan.nbr2.push_back(f1.pos.at(v));
    plan.nbr2_off.push_back(static_cast<int>(plan.nbr2.size()));
  }
  return plan;
}

SagePlan build_sage_plan(const DirectedGraph& g,
                         const std::vector<NodeId>& targets,
                         const std::array<int, 2>& fanouts, Rng& rng) {
  return build_sage_plan(symmetrized_adjacency(g), targets, fanouts, rng);
}

int sage_forward(Tape& tape, const SagePlan& plan, const GnnTapeIds& ids) {
  std::vector<int> frontier0(plan.frontier0.begin(), plan.frontier0.end());
  const int x0 = tape.gather_rows(ids.features, std::move(frontier0));

  const int self1 = tape.gather_rows(x0, plan.self1);
  const int nbr1 = tape.gather_rows(x0, plan.nbr1);
  const int mean1 = tape.group_mean(nbr1, plan.nbr1_off);
  const int pre1 = tape.add_bias(
      tape.add(tape.matmul(self1, ids.w1_self), tape.matmul(mean1, ids.w1_nbr)),
      ids.b1);
  const int h1 = tape.relu(pre1);

  const int self2 = tape.gather_rows(h1, plan.self2);
  const int nbr2 = tape.gather_rows(h1, plan.nbr2);
  const int mean2 = tape.group_mean(nbr2, plan.nbr2_off);
  const int out = tape.add_bias(
      tape.add(tape.matmul(self2, ids.w2_self), tape.matmul(mean2, ids.w2_nbr)),
      ids.b2);
  return tape.l2norm_rows(out);
}

int gcn_forward(Tape& tape, const CsrMatrix& a_hat, const GnnTapeIds& ids,
                const std::vector<NodeId>& nodes) {
  check(a_hat.rows == static_cast<int>(nodes.size()), "gcn_forward: size");
  std::vector<int> rows(nodes.begin(), nodes.end());
  const int x0 = tape.gather_rows(ids.features, std::move(rows));
  // Propagation uses the diagonally enhanced operator (A_hat + I): pure
  // repeated averaging dilutes each node's own signal so strongly that with
  // free lookup features the whole batch collapses into a narrow cone and
  // unsupervised training stalls; the identity path preserves node-level
  // distinctions alongside the smoothed neighborhood component.
  const int xw1 = tape.matmul(x0, ids.w1);
  const int h1 = tape.relu(
      tape.add_bias(tape.add(tape.spmm(&a_hat, xw1), xw1), ids.b1));
  const int hw2 = tape.matmul(h1, ids.w2);
  const int out = tape.add_bias(tape.add(tape.spmm(&a_hat, hw2), hw2), ids.b2);
  return tape.l2norm_rows(out);
}

// ---------------------------------------------------------------------------
// Training

namespace {

struct AdamState {
  Tensor m, v;
  int t = 0;
};

void adam_step(Tensor& param, const Tensor& grad, AdamState& s, double lr) {
  if (s.t == 0) {
    s.m = Tensor(param.rows, param.cols);
    s.v = Tensor(param.rows, param.cols);
  }
  ++s.t;
  const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  const double c1 = 1.0 - std::pow(b1, s.t);
  const double c2 = 1.0 - std::pow(b2, s.t);
  for (std::size_t i = 0; i < param.v.size(); ++i) {
    const double g = grad.v[i];
    s.m.v[i] = b1 * s.m.v[i] + (1.0 - b1) * g;
    s.v.v[i] = b2 * s.v.v[i] + (1.0 - b2) * g * g;
    param.v[i] -= lr * (s.m.v[i] / c1) / (std::sqrt(s.v.v[i] / c2) + eps);
  }
}

// Unigram^0.75 distribution over corpus node occurrences, restricted to an
// optional node subset (empty subset = all nodes).
AliasTable corpus_unigram_alias(const WalkCorpus& corpus,
                                const std::vector<char>& in_subset,
                                std::vector<NodeId>* support) {
  std::vector<double> counts(static_cast<std::size_t>(corpus.n_nodes), 0.0);
  for (const auto& walk : corpus.walks) {
    for (NodeId u : walk) counts[static_cast<std::size_t>(u)] += 1.0;
  }
  std::vector<double> weights;
  support->clear();
  for (NodeId u = 0; u < corpus.n_nodes; ++u) {
    if (!in_subset.empty() && !in_subset[static_cast<std::size_t>(u)]) continue;
    const double c = counts[static_cast<std::size_t>(u)];
    if (c > 0.0) {
      support->push_back(u);
      weights.push_back(std::pow(c, 0.75));
    }
  }
  if (weights.empty()) return AliasTable({1.0});  // caller checks support
  return AliasTable(weights);
}

struct PairSampler {
  const WalkCorpus* corpus;
  std::vector<int> eligible;  // walks with at least 2 nodes
  int window;

  PairSampler(const WalkCorpus& c, int w) : corpus(&c), window(w) {
    for (std::size_t i = 0; i < c.walks.size(); ++i) {
      if (c.walks[i].size() >= 2) eligible.push_back(static_cast<int>(i));
    }
  }

  bool empty() const { return eligible.empty(); }

  // Uniform walk, uniform center position, uniform context offset within the
  // clipped window.
  std::pair<NodeId, NodeId> sample(Rng& rng) const {
    const auto& walk =
        corpus->walks[static_cast<std::size_t>(eligible[rng.index(eligible.size())])];
    const int len = static_cast<int>(walk.size());
    const int i = static_cast<int>(rng.index(static_cast<std::size_t>(len)));
    const int lo = std::max(0, i - window);
    const int hi = std::min(len - 1, i + window);
    int j = lo + static_cast<int>(rng.index(static_cast<std::size_t>(hi - lo)));
    if (j >= i) ++j;  // skip the center slot itself
    return {walk[static_cast<std::size_t>(i)], walk[static_cast<std::size_t>(j)]};
  }
};

struct TrainContext {
  GnnModel model;
  bool trainable_features;
  std::vector<Tensor*> params;
  std::vector<AdamState> adam;

  TrainContext(GnnModel m, GnnVariant v, FeatureMode mode)
      : model(std::move(m)),
        trainable_features(mode == FeatureMode::trainable_lookup) {
    params = gnn_param_ptrs(model, v, mode);
    adam.resize(params.size());
  }

  void step(Tape& tape, const GnnTapeIds& ids, double lr) {
    std::vector<int> tape_ids = ids.all();
    if (!trainable_features) {
      std::erase(tape_ids, ids.features);  // frozen degree features
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
      adam_step(*params[k], tape.grad(tape_ids[k]), adam[k], lr);
    }
  }
};

// Accumulates skip-gram pair gradients into the output node's grad rows and
// returns the summed loss.
double accumulate_pair_grads(Tape& tape, int z_id,
                             const std::vector<std::array<int, 2>>& pairs,
                             const std::vector<std::vector<int>>& negatives,
                             Tensor& gz) {
  const Tensor& z = tape.value(z_id);
  const auto dim = static_cast<std::size_t>(z.cols);
  double loss = 0.0;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const int c = pairs[p][0];
    const int x = pairs[p][1];
    std::span<const double> center(z.row(c), dim);
    std::span<const double> context(z.row(x), dim);
    std::vector<std::span<const double>> negs;
    negs.reserve(negatives[p].size());
    for (int nidx : negatives[p]) negs.emplace_back(z.row(nidx), dim);
    loss += sg_pair_loss(center, context, negs);
    const SgPairGrad grad = sg_pair_grad(center, context, negs);
    double* gc = gz.row(c);
    for (std::size_t d = 0; d < dim; ++d) gc[d] += grad.center[d];
    double* gx = gz.row(x);
    for (std::size_t d = 0; d < dim; ++d) gx[d] += grad.context[d];
    for (std::size_t k = 0; k < negatives[p].size(); ++k) {
      double* gn = gz.row(negatives[p][k]);
      for (std::size_t d = 0; d < dim; ++d) gn[d] += grad.negatives[k][d];
    }
  }
  return loss;
}

EmbeddingMatrix sage_embed_all(const DirectedGraph& g, const GnnModel& model,
                               const GnnParams& params, std::uint64_t seed) {
  const auto adj = symmetrized_adjacency(g);
  const int n = g.n_nodes();
  EmbeddingMatrix emb(n, params.out_dim);
  const int chunk = 512;
  for (int start = 0; start < n; start += chunk) {
    const int stop = std::min(n, start + chunk);
    std::vector<NodeId> targets;
    targets.reserve(static_cast<std::size_t>(stop - start));
    for (int u = start; u < stop; ++u) targets.push_back(u);
    Rng rng(hash_seed(seed, kEmbedStream, static_cast<std::uint64_t>(start)));
    const SagePlan plan =
        build_sage_plan(adj, targets, params.neighbor_samples, rng);
    Tape tape;
    const GnnTapeIds ids = stage_params(tape, model, GnnVariant::sage_mean);
    const int z = sage_forward(tape, plan, ids);
    const Tensor& out = tape.value(z);
    for (int i = 0; i < out.rows; ++i) {
      std::copy(out.row(i), out.row(i) + out.cols, emb.row(start + i));
    }
  }
  return emb;
}

struct PartitionData {
  std::vector<NodeId> nodes;           // global ids, ascending
  CsrMatrix a_hat;                     // induced subgraph, normalized
};

// Per-partition induced normalized adjacencies, for inference-time forwards.
std::vector<PartitionData> partition_forward_data(
    const DirectedGraph& g, const std::vector<int>& part_of) {
  const int k = 1 + *std::max_element(part_of.begin(), part_of.end());
  std::vector<PartitionData> parts(static_cast<std::size_t>(k));
  std::vector<int> local(static_cast<std::size_t>(g.n_nodes()), -1);
  for (NodeId u = 0; u < g.n_nodes(); ++u) {
    parts[static_cast<std::size_t>(part_of[static_cast<std::size_t>(u)])]
        .nodes.push_back(u);
  }
  for (auto& part : parts) {
    for (std::size_t i = 0; i < part.nodes.size(); ++i) {
      local[static_cast<std::size_t>(part.nodes[i])] = static_cast<int>(i);
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u : part.nodes) {
      for (NodeId v : g.out_adj[static_cast<std::size_t>(u)]) {
        if (part_of[static_cast<std::size_t>(v)] ==
            part_of[static_cast<std::size_t>(u)]) {
          edges.emplace_back(local[static_cast<std::size_t>(u)],
                             local[static_cast<std::size_t>(v)]);
        }
      }
    }
    const DirectedGraph sub =
        graph_from_edges(static_cast<NodeId>(part.nodes.size()), edges);
    part.a_hat = gcn_normalize(sub);
  }
  return parts;
}

EmbeddingMatrix cgcn_embed_all(const DirectedGraph& g,
                               const std::vector<PartitionData>& parts,
                               const GnnModel& model, int out_dim) {
  EmbeddingMatrix emb(g.n_nodes(), out_dim);
  for (const auto& part : parts) {
    if (part.nodes.empty()) continue;
    Tape tape;
    const GnnTapeIds ids = stage_params(tape, model, GnnVariant::cluster_gcn);
    const int z = gcn_forward(tape, part.a_hat, ids, part.nodes);
    const Tensor& out = tape.value(z);
    for (std::size_t i = 0; i < part.nodes.size(); ++i) {
      std::copy(out.row(static_cast<int>(i)), out.row(static_cast<int>(i)) + out.cols,
                emb.row(part.nodes[i]));
    }
  }
  return emb;
}

}  // namespace

GnnTrainResult train_gnn(const DirectedGraph& g, const WalkCorpus& corpus,
                         const GnnParams& params, GnnVariant variant) {
  const int n = g.n_nodes();
  check(n >= 1, "train_gnn: empty graph");
  check(corpus.n_nodes == n, "train_gnn: corpus/graph size mismatch");
  bool any_walk = false;
  for (const auto& w : corpus.walks) {
    if (!w.empty()) { any_walk = true; break; }
  }
  check(any_walk, "train_gnn: empty corpus");
  check(params.window >= 1, "train_gnn: window < 1");
  check(params.negatives_per_pair >= 0, "train_gnn: negatives < 0");
  check(params.learning_rate > 0.0, "train_gnn: learning_rate <= 0");

  GnnTrainResult result;
  TrainContext ctx(init_gnn_model(g, params, variant), variant,
                   params.feature_mode);

  if (variant == GnnVariant::sage_mean) {
    const auto adj = symmetrized_adjacency(g);
    std::vector<NodeId> support;
    const AliasTable alias = corpus_unigram_alias(corpus, {}, &support);
    const PairSampler sampler(corpus, params.window);
    check(!sampler.empty(), "train_gnn: no walk has two nodes");
    const int pairs_per_epoch =
        params.pairs_per_epoch > 0 ? params.pairs_per_epoch : 10 * n;
    const int batch = std::max(1, params.batch_pairs);

    for (int epoch = 0; epoch < params.epochs; ++epoch) {
      Rng rng(hash_seed(params.seed, kEpochStream,
                        static_cast<std::uint64_t>(epoch)));
      double loss_sum = 0.0;
      int pairs_seen = 0;
      for (int done = 0; done < pairs_per_epoch; done += batch) {
        const int b = std::min(batch, pairs_per_epoch - done);
        NodeIndexer uniq;
        std::vector<std::array<int, 2>> pairs(static_cast<std::size_t>(b));
        std::vector<std::vector<int>> negs(static_cast<std::size_t>(b));
        for (int p = 0; p < b; ++p) {
          const auto [c, x] = sampler.sample(rng);
          pairs[static_cast<std::size_t>(p)] = {uniq.intern(c), uniq.intern(x)};
          for (int k = 0; k < params.negatives_per_pair; ++k) {
            const NodeId neg = support[alias.sample(rng)];
            if (neg == x) continue;  // matched negative carries no update
            negs[static_cast<std::size_t>(p)].push_back(uniq.intern(neg));
          }
        }
        const SagePlan plan =
            build_sage_plan(adj, uniq.order, params.neighbor_samples, rng);
        Tape tape;
        const GnnTapeIds ids = stage_params(tape, ctx.model, variant);
        const int z = sage_forward(tape, plan, ids);
        Tensor& gz = tape.grad(z);
        loss_sum += accumulate_pair_grads(tape, z, pairs, negs, gz);
        pairs_seen += b;
        const double inv = 1.0 / b;
        for (double& v : gz.v) v *= inv;
        tape.backward();
        ctx.step(tape, ids, params.learning_rate);
      }
      result.epoch_loss.push_back(pairs_seen > 0 ? loss_sum / pairs_seen : 0.0);
    }
    result.embeddings = sage_embed_all(g, ctx.model, params, params.seed);
    result.model = std::move(ctx.model);
    return result;
  }

  // cluster_gcn
  const std::vector<int> part_of = partition_graph(g, params.n_partitions,
                                                   params.seed);
  const int n_parts = params.n_partitions;
  // Each step trains on a GROUP of partitions re-drawn every epoch, not on a
  // single partition: partitions track dense regions, so a lone partition
  // would confine positives and negatives to the same region and the loss
  // could never push unrelated regions apart. Grouping restores
  // cross-partition edges in the forward pass and cross-partition negatives
  // in the objective while keeping each forward small.
  std::vector<std::vector<NodeId>> part_nodes(
      static_cast<std::size_t>(n_parts));
  for (NodeId u = 0; u < n; ++u) {
    part_nodes[static_cast<std::size_t>(part_of[static_cast<std::size_t>(u)])]
        .push_back(u);
  }
  std::vector<std::vector<int>> part_walks(static_cast<std::size_t>(n_parts));
  for (std::size_t w = 0; w < corpus.walks.size(); ++w) {
    if (corpus.walks[w].size() >= 2) {
      part_walks[static_cast<std::size_t>(
                     part_of[static_cast<std::size_t>(corpus.walks[w][0])])]
          .push_back(static_cast<int>(w));
    }
  }
  // Unigram^0.75 negative-sampling weight per node, computed once; each
  // group's alias table is rebuilt over its own support from these weights.
  std::vector<double> neg_weight(static_cast<std::size_t>(n), 0.0);
  for (const auto& walk : corpus.walks) {
    for (NodeId u : walk) neg_weight[static_cast<std::size_t>(u)] += 1.0;
  }
  for (double& w : neg_weight) {
    if (w > 0.0) w = std::pow(w, 0.75);
  }

  const int q = std::clamp(params.partitions_per_batch, 1, n_parts);
  std::vector<int> order(static_cast<std::size_t>(n_parts));
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> local(static_cast<std::size_t>(n), -1);
  std::vector<char> in_group(static_cast<std::size_t>(n), 0);

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    Rng rng(hash_seed(params.seed, kEpochStream,
                      static_cast<std::uint64_t>(epoch)));
    rng.shuffle(order);
    double loss_sum = 0.0;
    int pairs_seen = 0;
    for (int g0 = 0; g0 < n_parts; g0 += q) {
      const int g1 = std::min(n_parts, g0 + q);
      std::vector<NodeId> nodes;
      std::vector<int> walk_ids;
      for (int gi = g0; gi < g1; ++gi) {
        const std::size_t p =
            static_cast<std::size_t>(order[static_cast<std::size_t>(gi)]);
        nodes.insert(nodes.end(), part_nodes[p].begin(), part_nodes[p].end());
        walk_ids.insert(walk_ids.end(), part_walks[p].begin(),
                        part_walks[p].end());
      }
      if (nodes.size() < 2 || walk_ids.empty()) continue;
      // Canonical order keeps the step independent of which partition came
      // first in the shuffled group.
      std::sort(nodes.begin(), nodes.end());
      std::sort(walk_ids.begin(), walk_ids.end());
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        local[static_cast<std::size_t>(nodes[i])] = static_cast<int>(i);
        in_group[static_cast<std::size_t>(nodes[i])] = 1;
      }
      auto reset_scratch = [&] {
        for (NodeId u : nodes) {
          local[static_cast<std::size_t>(u)] = -1;
          in_group[static_cast<std::size_t>(u)] = 0;
        }
      };
      // Induced subgraph of the group, then its normalized adjacency.
      std::vector<std::pair<NodeId, NodeId>> edges;
      for (NodeId u : nodes) {
        for (NodeId v : g.out_adj[static_cast<std::size_t>(u)]) {
          if (in_group[static_cast<std::size_t>(v)]) {
            edges.emplace_back(local[static_cast<std::size_t>(u)],
                               local[static_cast<std::size_t>(v)]);
          }
        }
      }
      const DirectedGraph sub =
          graph_from_edges(static_cast<NodeId>(nodes.size()), edges);
      const CsrMatrix a_hat = gcn_normalize(sub);
      std::vector<NodeId> support;
      std::vector<double> weights;
      for (NodeId u : nodes) {
        if (neg_weight[static_cast<std::size_t>(u)] > 0.0) {
          support.push_back(u);
          weights.push_back(neg_weight[static_cast<std::size_t>(u)]);
        }
      }
      if (support.size() < 2) {
        reset_scratch();
        continue;
      }
      const AliasTable alias(weights);

      const int want_pairs =
          std::max(1, params.pairs_per_partition) * (g1 - g0);
      std::vector<std::array<int, 2>> pairs;
      std::vector<std::vector<int>> negs;
      const int max_tries = want_pairs * 20;
      for (int t = 0; t < max_tries &&
                      static_cast<int>(pairs.size()) < want_pairs; ++t) {
        const auto& walk = corpus.walks[static_cast<std::size_t>(
            walk_ids[rng.index(walk_ids.size())])];
        const int len = static_cast<int>(walk.size());
        const int i = static_cast<int>(rng.index(static_cast<std::size_t>(len)));
        const int lo = std::max(0, i - params.window);
        const int hi = std::min(len - 1, i + params.window);
        int j = lo + static_cast<int>(rng.index(static_cast<std::size_t>(hi - lo)));
        if (j >= i) ++j;
        const NodeId c = walk[static_cast<std::size_t>(i)];
        const NodeId x = walk[static_cast<std::size_t>(j)];
        // Both endpoints must live in this group (their embeddings come
        // from this forward pass); reject and resample otherwise.
        if (!in_group[static_cast<std::size_t>(c)] ||
            !in_group[static_cast<std::size_t>(x)]) {
          continue;
        }
        pairs.push_back({local[static_cast<std::size_t>(c)],
                         local[static_cast<std::size_t>(x)]});
        std::vector<int> pn;
        for (int k = 0; k < params.negatives_per_pair; ++k) {
          const NodeId neg = support[alias.sample(rng)];
          if (neg == x) continue;
          pn.push_back(local[static_cast<std::size_t>(neg)]);
        }
        negs.push_back(std::move(pn));
      }
      if (!pairs.empty()) {
        Tape tape;
        const GnnTapeIds ids = stage_params(tape, ctx.model, variant);
        const int z = gcn_forward(tape, a_hat, ids, nodes);
        Tensor& gz = tape.grad(z);
        loss_sum += accumulate_pair_grads(tape, z, pairs, negs, gz);
        pairs_seen += static_cast<int>(pairs.size());
        const double inv = 1.0 / static_cast<double>(pairs.size());
        for (double& v : gz.v) v *= inv;
        tape.backward();
        ctx.step(tape, ids, params.learning_rate);
      }
      reset_scratch();
    }
    result.epoch_loss.push_back(pairs_seen > 0 ? loss_sum / pairs_seen : 0.0);
  }
  result.embeddings = cgcn_embed_all(g, partition_forward_data(g, part_of),
                                     ctx.model, params.out_dim);
  result.model = std::move(ctx.model);
  return result;
}

EmbeddingMatrix gnn_embed(const DirectedGraph& g, const GnnModel& model,
                          const GnnParams& params, std::uint64_t sample_seed) {
  // Degree features are a fixed function of the graph, so they are rebuilt
  // for the target graph: that is what lets a trained model embed nodes it
  // never saw (the feature table must cover every node of g). Trainable
  // lookup features are tied to the training graph and cannot extend.
  const GnnModel* use = &model;
  GnnModel patched;
  if (params.feature_mode == FeatureMode::degree_features) {
    patched = model;
    patched.features = initial_features(g, params);
    use = &patched;
  } else if (model.features.rows != g.n_nodes()) {
    throw std::invalid_argument(
        "gnn_embed: lookup features do not cover this graph; "
        "use degree features for inductive embedding");
  }
  if (model.variant == GnnVariant::sage_mean) {
    return sage_embed_all(g, *use, params, sample_seed);
  }
  // Rebuild partitions for the target graph; forward each one.
  const std::vector<int> part_of =
      partition_graph(g, std::min(params.n_partitions, g.n_nodes()), sample_seed);
  return cgcn_embed_all(g, partition_forward_data(g, part_of), *use,
                        params.out_dim);
}

}  // namespace echograph
