#include "echograph/walks.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include "echograph/rng.hpp"

namespace echograph {

namespace {

std::vector<std::vector<NodeId>> symmetrized_adjacency(const DirectedGraph& g) {
  const std::size_t n = g.out_adj.size();
  std::vector<std::vector<NodeId>> merged(n);
  for (std::size_t u = 0; u < n; ++u) {
    const auto& a = g.out_adj[u];
    const auto& b = g.in_adj[u];
    auto& m = merged[u];
    m.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                   std::back_inserter(m));
  }
  return merged;
}

}  // namespace

WalkCorpus generate_walks(const DirectedGraph& g, const WalkParams& params,
                          int threads) {
  if (params.walks_per_node < 1) {
    throw std::invalid_argument("walks: walks_per_node must be >= 1");
  }
  if (params.max_len < 1) {
    throw std::invalid_argument("walks: max_len must be >= 1");
  }
  const NodeId n = g.n_nodes();

  // For symmetrized traversal the union adjacency is materialized once;
  // walk generation then only does O(1) lookups per step.
  const std::vector<std::vector<NodeId>>* adj = &g.out_adj;
  std::vector<std::vector<NodeId>> merged;
  if (params.direction == DirectionMode::symmetrized) {
    merged = symmetrized_adjacency(g);
    adj = &merged;
  }

  WalkCorpus corpus;
  corpus.n_nodes = n;
  const std::size_t wpn = static_cast<std::size_t>(params.walks_per_node);
  corpus.walks.assign(static_cast<std::size_t>(n) * wpn, {});

  auto run_range = [&](NodeId lo, NodeId hi) {
    for (NodeId start = lo; start < hi; ++start) {
      for (std::size_t k = 0; k < wpn; ++k) {
        Rng rng(hash_seed(params.seed, static_cast<std::uint64_t>(start),
                          static_cast<std::uint64_t>(k)));
        auto& walk = corpus.walks[static_cast<std::size_t>(start) * wpn + k];
        walk.reserve(static_cast<std::size_t>(params.max_len));
        NodeId cur = start;
        walk.push_back(cur);
        while (walk.size() < static_cast<std::size_t>(params.max_len)) {
          const auto& nbrs = (*adj)[static_cast<std::size_t>(cur)];
          if (nbrs.empty()) break;
          cur = nbrs[rng.index(nbrs.size())];
          walk.push_back(cur);
        }
      }
    }
  };

  const int workers = std::max(1, std::min<int>(threads, n > 0 ? n : 1));
  if (workers == 1 || n == 0) {
    run_range(0, n);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const NodeId chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const NodeId lo = std::min<NodeId>(n, w * chunk);
      const NodeId hi = std::min<NodeId>(n, lo + chunk);
      if (lo < hi) pool.emplace_back(run_range, lo, hi);
    }
    for (auto& t : pool) t.join();
  }
  return corpus;
}

void for_each_context_pair(const WalkCorpus& corpus, int window,
                           const std::function<void(NodeId, NodeId)>& fn) {
  if (window < 1) throw std::invalid_argument("walks: window must be >= 1");
  for (const auto& walk : corpus.walks) {
    const std::size_t len = walk.size();
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t lo =
          i >= static_cast<std::size_t>(window) ? i - window : 0;
      const std::size_t hi =
          std::min(len, i + static_cast<std::size_t>(window) + 1);
      for (std::size_t j = lo; j < hi; ++j) {
        if (j != i) fn(walk[i], walk[j]);
      }
    }
  }
}

std::vector<std::pair<NodeId, NodeId>> context_pairs(const WalkCorpus& corpus,
                                                     int window) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(count_context_pairs(corpus, window));
  for_each_context_pair(corpus, window, [&](NodeId c, NodeId x) {
    pairs.emplace_back(c, x);
  });
  return pairs;
}

std::size_t count_context_pairs(const WalkCorpus& corpus, int window) {
  if (window < 1) throw std::invalid_argument("walks: window must be >= 1");
  std::size_t total = 0;
  const std::size_t w = static_cast<std::size_t>(window);
  for (const auto& walk : corpus.walks) {
    const std::size_t len = walk.size();
    for (std::size_t i = 0; i < len; ++i) {
      total += std::min(i, w) + std::min(len - 1 - i, w);
    }
  }
  return total;
}

}  // namespace echograph
