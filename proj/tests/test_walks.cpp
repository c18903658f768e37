#include <doctest.h>

#include <stdexcept>

#include <set>
#include <utility>

#include "echograph/walks.hpp"

using namespace echograph;

namespace {

WalkCorpus corpus_of(std::vector<std::vector<NodeId>> walks, NodeId n) {
  WalkCorpus c;
  c.walks = std::move(walks);
  c.n_nodes = n;
  return c;
}

}  // namespace

TEST_SUITE("walks") {

TEST_CASE("isolated nodes yield length-1 walks") {
  const auto g = graph_from_edges(3, {{0, 1}, {1, 0}});  // node 2 isolated
  WalkParams p;
  p.walks_per_node = 4;
  p.max_len = 10;
  const auto corpus = generate_walks(g, p);
  for (int k = 0; k < p.walks_per_node; ++k) {
    const auto& walk = corpus.walks[2 * p.walks_per_node + k];
    REQUIRE(walk.size() == 1);
    CHECK(walk[0] == 2);
  }
}

TEST_CASE("two-cycle forces an alternating walk") {
  const auto g = graph_from_edges(2, {{0, 1}, {1, 0}});
  WalkParams p;
  p.walks_per_node = 2;
  p.max_len = 4;
  for (auto mode : {DirectionMode::out_edges, DirectionMode::symmetrized}) {
    p.direction = mode;
    const auto corpus = generate_walks(g, p);
    CHECK(corpus.walks[0] == std::vector<NodeId>{0, 1, 0, 1});
    CHECK(corpus.walks[static_cast<std::size_t>(p.walks_per_node)] ==
          std::vector<NodeId>{1, 0, 1, 0});
  }
}

TEST_CASE("corpus holds exactly walks_per_node walks per start node") {
  const auto g = graph_from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
  WalkParams p;
  p.walks_per_node = 7;
  p.max_len = 12;
  const auto corpus = generate_walks(g, p);
  CHECK(corpus.walks.size() == 5u * 7u);
  for (NodeId v = 0; v < 5; ++v) {
    for (int k = 0; k < p.walks_per_node; ++k) {
      CHECK(corpus.walks[static_cast<std::size_t>(v) * 7 + k][0] == v);
    }
  }
}

TEST_CASE("every step follows an edge under the chosen mode") {
  const auto g = graph_from_edges(
      6, {{0, 1}, {1, 2}, {2, 0}, {3, 0}, {4, 3}, {2, 4}, {5, 2}});
  WalkParams p;
  p.walks_per_node = 5;
  p.max_len = 20;

  p.direction = DirectionMode::out_edges;
  for (const auto& walk : generate_walks(g, p).walks) {
    for (std::size_t i = 1; i < walk.size(); ++i) {
      CHECK(g.has_edge(walk[i - 1], walk[i]));
    }
  }

  p.direction = DirectionMode::symmetrized;
  for (const auto& walk : generate_walks(g, p).walks) {
    for (std::size_t i = 1; i < walk.size(); ++i) {
      CHECK((g.has_edge(walk[i - 1], walk[i]) ||
             g.has_edge(walk[i], walk[i - 1])));
    }
  }
}

TEST_CASE("walk lengths stay within [1, max_len]") {
  const auto g = graph_from_edges(4, {{0, 1}, {1, 2}, {0, 3}});
  WalkParams p;
  p.walks_per_node = 6;
  p.max_len = 9;
  p.direction = DirectionMode::out_edges;  // node 2 and 3 are sinks
  for (const auto& walk : generate_walks(g, p).walks) {
    CHECK(walk.size() >= 1);
    CHECK(walk.size() <= 9);
  }
}

TEST_CASE("generation is deterministic and thread-count invariant") {
  const auto g = graph_from_edges(
      8, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 0},
          {0, 4}, {2, 6}});
  WalkParams p;
  p.walks_per_node = 10;
  p.max_len = 30;
  p.seed = 99;
  const auto a = generate_walks(g, p, 1);
  const auto b = generate_walks(g, p, 1);
  const auto c = generate_walks(g, p, 4);
  CHECK(a.walks == b.walks);
  CHECK(a.walks == c.walks);

  p.seed = 100;
  const auto d = generate_walks(g, p, 1);
  CHECK(a.walks != d.walks);
}

TEST_CASE("parameter validation") {
  const auto g = graph_from_edges(2, {{0, 1}});
  WalkParams p;
  p.walks_per_node = 0;
  CHECK_THROWS_AS(generate_walks(g, p), std::invalid_argument);
  p.walks_per_node = 1;
  p.max_len = 0;
  CHECK_THROWS_AS(generate_walks(g, p), std::invalid_argument);
}

TEST_CASE("context pairs of a two-node walk") {
  const auto corpus = corpus_of({{0, 1}}, 2);
  const auto pairs = context_pairs(corpus, 10);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0] == std::make_pair<NodeId, NodeId>(0, 1));
  CHECK(pairs[1] == std::make_pair<NodeId, NodeId>(1, 0));
}

TEST_CASE("wide window yields L*(L-1) pairs") {
  const auto corpus = corpus_of({{3, 1, 4, 1, 5, 9, 2, 6}}, 10);
  const std::size_t L = 8;
  CHECK(context_pairs(corpus, 10).size() == L * (L - 1));
  CHECK(count_context_pairs(corpus, 10) == L * (L - 1));
}

TEST_CASE("window one emits only adjacent pairs") {
  const auto corpus = corpus_of({{0, 1, 2}}, 3);
  const auto pairs = context_pairs(corpus, 1);
  const std::vector<std::pair<NodeId, NodeId>> expected = {
      {0, 1}, {1, 0}, {1, 2}, {2, 1}};
  CHECK(pairs == expected);
}

TEST_CASE("pair count matches enumeration across window sizes") {
  const auto corpus = corpus_of({{0, 1, 2, 3, 4}, {5}, {6, 7}}, 8);
  for (int window = 1; window <= 6; ++window) {
    CHECK(count_context_pairs(corpus, window) ==
          context_pairs(corpus, window).size());
  }
}

}  // TEST_SUITE
