#pragma once

// Synthetic echo-chamber benchmark: a directed stochastic block model for
// the follower graph, homophilous engagement for fake articles, and token
// text whose class signal is controlled by a noise knob. Output uses the
// exact formats the ingestion path consumes, so the full pipeline can be
// validated end to end with known ground truth.

#include <cstdint>
#include <vector>

#include "echograph/graph.hpp"

namespace echograph {

struct SyntheticSpec {
  int n_users = 2000;
  int n_communities = 2;

  // Marginal directed edge probabilities per ordered pair.
  double p_in = 0.02;
  double p_out = 0.001;

  // Fraction of the marginal edge mass planted as mutual pairs. Real
  // follower networks reciprocate heavily (friend and follower degree
  // distributions come out nearly equal), and with fully independent
  // per-direction draws at desk-scale p_in the mutual-follow graph would
  // be almost empty. The marginal edge probability stays exactly p_in /
  // p_out for any value here; 0 recovers fully independent directions.
  double reciprocity = 0.5;

  // Extra strictly one-directional cross-community follows (never forms a
  // mutual pair by itself); models asymmetric cross-community noise that
  // pollutes the follower graph but washes out of the friendship graph.
  double cross_extra_oneway_p = 0.0;

  int n_articles = 400;
  double fake_fraction = 0.45;

  // Probability a fake article's engager is drawn from community 0; the
  // remaining mass is uniform over the other communities. Factual
  // engagers are uniform over all users.
  double homophily = 0.95;
  int engagers_min = 20;
  int engagers_max = 20;

  // Token text: each token is common-vocabulary noise with probability
  // text_noise, otherwise drawn from the community vocabulary of a random
  // engager of the article.
  double text_noise = 0.8;
  int text_len_min = 15;
  int text_len_max = 40;
  int tweets_per_article = 3;
  int tweet_len = 8;
  int common_vocab = 500;
  int community_vocab = 120;

  std::uint64_t seed = 1;
};

struct SyntheticData {
  DirectedGraph followers;
  std::vector<int> community;       // node -> community id
  std::vector<RawArticle> articles; // engaged_users carry external ids
};

// External id of synthetic user index i ("u" + zero-padded index).
std::string synth_user_id(NodeId i);

// Directed SBM with planted reciprocation. Nodes split into
// n_communities contiguous blocks of near-equal size.
// Throws std::invalid_argument on non-probability parameters or
// n_communities outside [1, n_users].
DirectedGraph gen_graph(const SyntheticSpec& spec, std::vector<int>& community);

// Articles with homophilous engagement and mixed-vocabulary text.
// Engager sets are distinct users; labels are an exact fake_fraction
// count, shuffled. Throws std::invalid_argument on inconsistent sizes.
std::vector<RawArticle> gen_articles(const SyntheticSpec& spec,
                                     const std::vector<int>& community);

SyntheticData synth_dataset(const SyntheticSpec& spec);

}  // namespace echograph
