#pragma once

// Social-graph core: directed follower graph, derived mutual-follow
// friendship graph, user table, news articles, degree statistics and
// low-degree pruning. Everything downstream (walks, embeddings, the
// article classifier) works on the dense node indices assigned here.

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace echograph {

using NodeId = std::int32_t;

// Crawler APIs cap neighbor listings at 5000; degree_stats reports how many
// nodes sit above that cap so real crawls can be sanity-checked.
inline constexpr std::int64_t kNeighborListCap = 5000;

// Adjacency is stored sorted and duplicate-free in both directions;
// in_adj is the exact transpose of out_adj. Self-loops are never stored.
struct DirectedGraph {
  std::vector<std::vector<NodeId>> out_adj;
  std::vector<std::vector<NodeId>> in_adj;

  NodeId n_nodes() const { return static_cast<NodeId>(out_adj.size()); }

  std::size_t n_edges() const {
    std::size_t m = 0;
    for (const auto& a : out_adj) m += a.size();
    return m;
  }

  bool has_edge(NodeId src, NodeId dst) const;

  // Throws std::logic_error if a structural invariant is violated.
  // Test and debugging aid; production paths maintain the invariants
  // by construction.
  void check() const;
};

// Builds a graph over nodes [0, n). Self-loops are dropped, duplicate
// edges collapse, endpoints out of range throw std::invalid_argument.
DirectedGraph graph_from_edges(NodeId n_nodes,
                               const std::vector<std::pair<NodeId, NodeId>>& edges);

enum class Label { fake, factual };

const char* to_string(Label label);
Label label_from_string(const std::string& s);  // throws std::invalid_argument

// Maps external (crawler-side) string ids to dense node indices.
// Entries [0, n_graph) are graph nodes; entries flagged missing were
// referenced by articles but absent from the edge data and receive the
// sentinel embedding downstream.
struct UserTable {
  std::vector<std::string> external_id;
  std::vector<bool> missing;
  std::unordered_map<std::string, NodeId> index_of;

  NodeId size() const { return static_cast<NodeId>(external_id.size()); }

  NodeId add(const std::string& ext, bool is_missing);

  // -1 when unknown.
  NodeId find(const std::string& ext) const;
};

struct NewsArticle {
  std::string article_id;
  Label label = Label::factual;
  std::string text;                   // may be empty (some articles carry none)
  std::vector<std::string> tweets;
  std::vector<NodeId> engaged_users;  // sorted unique indices into UserTable
};

// Article as parsed from disk or produced by the synthetic generator,
// before user ids are resolved against a graph.
struct RawArticle {
  std::string article_id;
  Label label = Label::factual;
  std::string text;
  std::vector<std::string> tweets;
  std::vector<std::string> engaged_users;  // external ids
};

struct Dataset {
  DirectedGraph followers;   // edge i -> j means "i follows j"
  DirectedGraph friendship;  // mutual follows, stored in both directions
  UserTable users;
  std::vector<NewsArticle> articles;
};

struct EdgeRecord {
  std::string src;
  std::string dst;
};

struct IngestResult {
  DirectedGraph graph;
  UserTable users;
};

// Assigns dense indices in first-seen order (src before dst within a
// record), drops self-loops, collapses duplicates.
IngestResult ingest_edges(const std::vector<EdgeRecord>& edges);

// Friendship edge i~j iff i->j and j->i both present. Result is symmetric:
// each friendship is stored in both adjacency directions.
DirectedGraph derive_friendship(const DirectedGraph& followers);

struct PruneResult {
  DirectedGraph graph;
  std::vector<NodeId> old_to_new;  // -1 for removed nodes
  std::vector<NodeId> kept;        // new index -> old index
};

// Removes nodes whose total incident edge count (out-degree + in-degree,
// computed once on the input graph) is below min_edges, unless protected.
// Single pass: survivors are not re-examined after their neighbors vanish.
PruneResult prune_low_degree(const DirectedGraph& g, int min_edges,
                             const std::vector<bool>& protected_nodes);

enum class Direction { out, in };

struct DegreeStats {
  double avg = 0.0;
  double std_dev = 0.0;  // population standard deviation
  double p25 = 0.0;      // nearest-rank percentiles
  double p50 = 0.0;
  double p75 = 0.0;
  std::int64_t max = 0;
  std::int64_t count_over_cap = 0;  // nodes with degree > kNeighborListCap
};

// Throws std::invalid_argument on an empty graph.
DegreeStats degree_stats(const DirectedGraph& g, Direction dir);

// Resolves raw articles against an ingested graph and assembles the full
// dataset: engaged users protect their nodes from pruning, articles are
// re-indexed against the pruned graph, engaged users never seen in the
// edge data are appended to the user table flagged missing, and the
// friendship graph is derived from the pruned follower graph.
// Throws std::invalid_argument on duplicate article ids.
Dataset build_dataset(const IngestResult& ingested,
                      const std::vector<RawArticle>& raw_articles,
                      int min_edges = 2);

}  // namespace echograph
