#include "echograph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace echograph {

namespace {

void sort_unique(std::vector<NodeId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<std::vector<NodeId>> transpose(
    const std::vector<std::vector<NodeId>>& adj) {
  std::vector<std::vector<NodeId>> t(adj.size());
  std::vector<std::size_t> indeg(adj.size(), 0);
  for (const auto& nbrs : adj) {
    for (NodeId v : nbrs) ++indeg[static_cast<std::size_t>(v)];
  }
  for (std::size_t i = 0; i < t.size(); ++i) t[i].reserve(indeg[i]);
  for (std::size_t u = 0; u < adj.size(); ++u) {
    for (NodeId v : adj[u]) {
      t[static_cast<std::size_t>(v)].push_back(static_cast<NodeId>(u));
    }
  }
  // Source indices are visited in increasing order, so rows are sorted.
  return t;
}

}  // namespace

bool DirectedGraph::has_edge(NodeId src, NodeId dst) const {
  if (src < 0 || src >= n_nodes() || dst < 0 || dst >= n_nodes()) return false;
  const auto& nbrs = out_adj[static_cast<std::size_t>(src)];
  return std::binary_search(nbrs.begin(), nbrs.end(), dst);
}

void DirectedGraph::check() const {
  if (out_adj.size() != in_adj.size()) {
    throw std::logic_error("graph: out/in adjacency size mismatch");
  }
  const NodeId n = n_nodes();
  auto check_rows = [n](const std::vector<std::vector<NodeId>>& adj,
                        const char* what) {
    for (std::size_t u = 0; u < adj.size(); ++u) {
      const auto& nbrs = adj[u];
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        if (nbrs[k] < 0 || nbrs[k] >= n) {
          throw std::logic_error(std::string("graph: ") + what +
                                 " index out of range");
        }
        if (nbrs[k] == static_cast<NodeId>(u)) {
          throw std::logic_error(std::string("graph: ") + what + " self-loop");
        }
        if (k > 0 && nbrs[k - 1] >= nbrs[k]) {
          throw std::logic_error(std::string("graph: ") + what +
                                 " row not sorted/unique");
        }
      }
    }
  };
  check_rows(out_adj, "out_adj");
  check_rows(in_adj, "in_adj");
  if (transpose(out_adj) != in_adj) {
    throw std::logic_error("graph: in_adj is not the transpose of out_adj");
  }
}

DirectedGraph graph_from_edges(
    NodeId n_nodes, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  if (n_nodes < 0) throw std::invalid_argument("graph: negative node count");
  DirectedGraph g;
  g.out_adj.resize(static_cast<std::size_t>(n_nodes));
  for (const auto& [src, dst] : edges) {
    if (src < 0 || src >= n_nodes || dst < 0 || dst >= n_nodes) {
      throw std::invalid_argument("graph: edge endpoint out of range");
    }
    if (src == dst) continue;
    g.out_adj[static_cast<std::size_t>(src)].push_back(dst);
  }
  for (auto& nbrs : g.out_adj) sort_unique(nbrs);
  g.in_adj = transpose(g.out_adj);
  return g;
}

const char* to_string(Label label) {
  return label == Label::fake ? "fake" : "factual";
}

Label label_from_string(const std::string& s) {
  if (s == "fake") return Label::fake;
  if (s == "factual") return Label::factual;
  throw std::invalid_argument("unknown label: '" + s + "'");
}

NodeId UserTable::add(const std::string& ext, bool is_missing) {
  auto [it, inserted] = index_of.try_emplace(ext, size());
  if (inserted) {
    external_id.push_back(ext);
    missing.push_back(is_missing);
  }
  return it->second;
}

NodeId UserTable::find(const std::string& ext) const {
  auto it = index_of.find(ext);
  return it == index_of.end() ? NodeId{-1} : it->second;
}

IngestResult ingest_edges(const std::vector<EdgeRecord>& edges) {
  IngestResult r;
  std::vector<std::pair<NodeId, NodeId>> indexed;
  indexed.reserve(edges.size());
  for (const auto& e : edges) {
    const NodeId s = r.users.add(e.src, false);
    const NodeId d = r.users.add(e.dst, false);
    indexed.emplace_back(s, d);
  }
  r.graph = graph_from_edges(r.users.size(), indexed);
  return r;
}

DirectedGraph derive_friendship(const DirectedGraph& followers) {
  DirectedGraph fr;
  const std::size_t n = followers.out_adj.size();
  fr.out_adj.resize(n);
  for (std::size_t u = 0; u < n; ++u) {
    const auto& out = followers.out_adj[u];
    const auto& in = followers.in_adj[u];
    auto& mutual = fr.out_adj[u];
    std::set_intersection(out.begin(), out.end(), in.begin(), in.end(),
                          std::back_inserter(mutual));
  }
  fr.in_adj = fr.out_adj;  // mutual edges are symmetric by construction
  return fr;
}

PruneResult prune_low_degree(const DirectedGraph& g, int min_edges,
                             const std::vector<bool>& protected_nodes) {
  const std::size_t n = g.out_adj.size();
  if (protected_nodes.size() != n) {
    throw std::invalid_argument("prune: protected mask size mismatch");
  }
  PruneResult r;
  r.old_to_new.assign(n, -1);
  for (std::size_t u = 0; u < n; ++u) {
    const std::size_t total = g.out_adj[u].size() + g.in_adj[u].size();
    if (protected_nodes[u] || total >= static_cast<std::size_t>(min_edges)) {
      r.old_to_new[u] = static_cast<NodeId>(r.kept.size());
      r.kept.push_back(static_cast<NodeId>(u));
    }
  }
  r.graph.out_adj.resize(r.kept.size());
  for (std::size_t nu = 0; nu < r.kept.size(); ++nu) {
    const auto& nbrs = g.out_adj[static_cast<std::size_t>(r.kept[nu])];
    auto& row = r.graph.out_adj[nu];
    for (NodeId v : nbrs) {
      const NodeId nv = r.old_to_new[static_cast<std::size_t>(v)];
      if (nv >= 0) row.push_back(nv);
    }
    // The remap is monotone, so filtered rows remain sorted and unique.
  }
  r.graph.in_adj.resize(r.kept.size());
  for (std::size_t nu = 0; nu < r.kept.size(); ++nu) {
    const auto& nbrs = g.in_adj[static_cast<std::size_t>(r.kept[nu])];
    auto& row = r.graph.in_adj[nu];
    for (NodeId v : nbrs) {
      const NodeId nv = r.old_to_new[static_cast<std::size_t>(v)];
      if (nv >= 0) row.push_back(nv);
    }
  }
  return r;
}

DegreeStats degree_stats(const DirectedGraph& g, Direction dir) {
  const auto& adj = dir == Direction::out ? g.out_adj : g.in_adj;
  if (adj.empty()) throw std::invalid_argument("degree_stats: empty graph");
  std::vector<std::int64_t> deg(adj.size());
  for (std::size_t i = 0; i < adj.size(); ++i) {
    deg[i] = static_cast<std::int64_t>(adj[i].size());
  }
  std::sort(deg.begin(), deg.end());

  DegreeStats s;
  const double n = static_cast<double>(deg.size());
  double sum = 0.0, sum_sq = 0.0;
  for (std::int64_t d : deg) {
    sum += static_cast<double>(d);
    sum_sq += static_cast<double>(d) * static_cast<double>(d);
    if (d > kNeighborListCap) ++s.count_over_cap;
  }
  s.avg = sum / n;
  const double var = std::max(0.0, sum_sq / n - s.avg * s.avg);
  s.std_dev = std::sqrt(var);
  s.max = deg.back();
  auto nearest_rank = [&](double q) {
    const auto rank = static_cast<std::size_t>(std::ceil(q * n));
    return static_cast<double>(deg[std::max<std::size_t>(rank, 1) - 1]);
  };
  s.p25 = nearest_rank(0.25);
  s.p50 = nearest_rank(0.50);
  s.p75 = nearest_rank(0.75);
  return s;
}

Dataset build_dataset(const IngestResult& ingested,
                      const std::vector<RawArticle>& raw_articles,
                      int min_edges) {
  const NodeId n_raw = ingested.graph.n_nodes();
  std::vector<bool> protected_nodes(static_cast<std::size_t>(n_raw), false);
  for (const auto& art : raw_articles) {
    for (const auto& ext : art.engaged_users) {
      const NodeId idx = ingested.users.find(ext);
      if (idx >= 0 && idx < n_raw) {
        protected_nodes[static_cast<std::size_t>(idx)] = true;
      }
    }
  }

  PruneResult pruned =
      prune_low_degree(ingested.graph, min_edges, protected_nodes);

  Dataset ds;
  ds.followers = std::move(pruned.graph);
  ds.friendship = derive_friendship(ds.followers);
  for (NodeId old_idx : pruned.kept) {
    ds.users.add(ingested.users.external_id[static_cast<std::size_t>(old_idx)],
                 false);
  }

  ds.articles.reserve(raw_articles.size());
  std::unordered_map<std::string, bool> seen_ids;
  for (const auto& raw : raw_articles) {
    if (!seen_ids.try_emplace(raw.article_id, true).second) {
      throw std::invalid_argument("duplicate article id: '" + raw.article_id +
                                  "'");
    }
    NewsArticle art;
    art.article_id = raw.article_id;
    art.label = raw.label;
    art.text = raw.text;
    art.tweets = raw.tweets;
    art.engaged_users.reserve(raw.engaged_users.size());
    for (const auto& ext : raw.engaged_users) {
      NodeId idx = ds.users.find(ext);
      if (idx < 0) idx = ds.users.add(ext, true);
      art.engaged_users.push_back(idx);
    }
    std::sort(art.engaged_users.begin(), art.engaged_users.end());
    art.engaged_users.erase(
        std::unique(art.engaged_users.begin(), art.engaged_users.end()),
        art.engaged_users.end());
    ds.articles.push_back(std::move(art));
  }
  return ds;
}

}  // namespace echograph
