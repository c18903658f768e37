#pragma once

// Truncated uniform random walks over a social graph plus the window-based
// context-pair stream consumed by the skip-gram trainer. Each walk has its
// own RNG stream seeded by hash(seed, start_node, walk_index), so the corpus
// is byte-identical no matter how many worker threads generate it.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "echograph/graph.hpp"

namespace echograph {

// symmetrized treats every directed edge as traversable both ways (the
// default for follower graphs, where walking against "follows" direction
// is meaningful); out_edges restricts steps to stored edge direction.
enum class DirectionMode { out_edges, symmetrized };

struct WalkParams {
  int walks_per_node = 10;
  int max_len = 80;  // nodes per walk, including the start
  DirectionMode direction = DirectionMode::symmetrized;
  std::uint64_t seed = 1;
};

struct WalkCorpus {
  std::vector<std::vector<NodeId>> walks;  // node-major: walks_per_node per node
  NodeId n_nodes = 0;
};

// Generates exactly walks_per_node walks from every node, truncated at
// max_len nodes or earlier when a node without usable neighbors is reached.
// threads > 1 parallelizes generation without changing the output.
WalkCorpus generate_walks(const DirectedGraph& g, const WalkParams& params,
                          int threads = 1);

// Calls fn(center, context) for every ordered within-walk pair at distance
// <= window (center != context). Pairs are emitted walk by walk, centers in
// walk order, contexts left-to-right.
void for_each_context_pair(const WalkCorpus& corpus, int window,
                           const std::function<void(NodeId, NodeId)>& fn);

std::vector<std::pair<NodeId, NodeId>> context_pairs(const WalkCorpus& corpus,
                                                     int window);

std::size_t count_context_pairs(const WalkCorpus& corpus, int window);

}  // namespace echograph
