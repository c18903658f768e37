#include "echograph/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_set>

#include "echograph/rng.hpp"

namespace echograph {

namespace {

constexpr std::uint64_t kGraphStream = 0x53424d47ULL;
constexpr std::uint64_t kLabelStream = 0x4c41424cULL;
constexpr std::uint64_t kArticleStream = 0x41525443ULL;

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string("synth: ") + name +
                                " must be in [0, 1]");
  }
}

int community_of(int i, int n, int k) {
  return static_cast<int>(static_cast<std::int64_t>(i) * k / n);
}

}  // namespace

std::string synth_user_id(NodeId i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "u%06d", i);
  return buf;
}

DirectedGraph gen_graph(const SyntheticSpec& spec, std::vector<int>& community) {
  const int n = spec.n_users;
  const int k = spec.n_communities;
  if (n < 1) throw std::invalid_argument("synth: n_users must be >= 1");
  if (k < 1 || k > n) {
    throw std::invalid_argument("synth: n_communities must be in [1, n_users]");
  }
  check_probability(spec.p_in, "p_in");
  check_probability(spec.p_out, "p_out");
  check_probability(spec.reciprocity, "reciprocity");
  check_probability(spec.cross_extra_oneway_p, "cross_extra_oneway_p");

  community.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) community[static_cast<std::size_t>(i)] =
      community_of(i, n, k);

  // Per unordered pair: plant a mutual pair with probability r*p, else
  // draw each direction independently at q = p(1-r)/(1-rp), which keeps
  // the per-direction marginal at exactly p.
  auto residual = [](double p, double r) {
    const double rp = r * p;
    if (rp >= 1.0) return 1.0;
    return p * (1.0 - r) / (1.0 - rp);
  };
  const double q_in = residual(spec.p_in, spec.reciprocity);
  const double q_out = residual(spec.p_out, spec.reciprocity);

  Rng rng(hash_seed(spec.seed, kGraphStream));
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool same =
          community[static_cast<std::size_t>(i)] ==
          community[static_cast<std::size_t>(j)];
      const double p = same ? spec.p_in : spec.p_out;
      const double q = same ? q_in : q_out;
      const double r = spec.reciprocity;
      if (p > 0.0 && rng.unit() < r * p) {
        edges.emplace_back(i, j);
        edges.emplace_back(j, i);
      } else if (q > 0.0) {
        if (rng.unit() < q) edges.emplace_back(i, j);
        if (rng.unit() < q) edges.emplace_back(j, i);
      }
      if (!same && spec.cross_extra_oneway_p > 0.0 &&
          rng.unit() < spec.cross_extra_oneway_p) {
        // Strictly one direction per pair so the noise alone never
        // produces a mutual follow.
        if (rng.unit() < 0.5) {
          edges.emplace_back(i, j);
        } else {
          edges.emplace_back(j, i);
        }
      }
    }
  }
  return graph_from_edges(n, edges);
}

std::vector<RawArticle> gen_articles(const SyntheticSpec& spec,
                                     const std::vector<int>& community) {
  const int n = spec.n_users;
  const int k = spec.n_communities;
  if (static_cast<int>(community.size()) != n) {
    throw std::invalid_argument("synth: community size mismatch");
  }
  if (spec.n_articles < 0) {
    throw std::invalid_argument("synth: n_articles must be >= 0");
  }
  check_probability(spec.fake_fraction, "fake_fraction");
  check_probability(spec.homophily, "homophily");
  check_probability(spec.text_noise, "text_noise");
  if (spec.engagers_min < 0 || spec.engagers_max < spec.engagers_min ||
      spec.engagers_max > n) {
    throw std::invalid_argument("synth: bad engagers range");
  }
  if (spec.text_len_min < 0 || spec.text_len_max < spec.text_len_min ||
      spec.tweet_len < 0 || spec.tweets_per_article < 0) {
    throw std::invalid_argument("synth: bad text lengths");
  }
  if (spec.common_vocab < 1 || spec.community_vocab < 1) {
    throw std::invalid_argument("synth: vocabularies must be non-empty");
  }

  std::vector<std::vector<NodeId>> members(static_cast<std::size_t>(k));
  for (int i = 0; i < n; ++i) {
    members[static_cast<std::size_t>(community[static_cast<std::size_t>(i)])]
        .push_back(i);
  }
  for (const auto& m : members) {
    if (m.empty()) throw std::invalid_argument("synth: empty community");
  }

  const int n_fake = static_cast<int>(
      std::floor(spec.fake_fraction * static_cast<double>(spec.n_articles)));
  std::vector<Label> labels(static_cast<std::size_t>(spec.n_articles),
                            Label::factual);
  std::fill_n(labels.begin(), n_fake, Label::fake);
  {
    Rng rng(hash_seed(spec.seed, kLabelStream));
    rng.shuffle(labels);
  }

  std::vector<RawArticle> articles(static_cast<std::size_t>(spec.n_articles));
  for (int a = 0; a < spec.n_articles; ++a) {
    Rng rng(hash_seed(spec.seed, kArticleStream, static_cast<std::uint64_t>(a)));
    RawArticle& art = articles[static_cast<std::size_t>(a)];
    char idbuf[16];
    std::snprintf(idbuf, sizeof(idbuf), "a%05d", a);
    art.article_id = idbuf;
    art.label = labels[static_cast<std::size_t>(a)];

    const int want = spec.engagers_min +
                     (spec.engagers_max > spec.engagers_min
                          ? static_cast<int>(rng.below(static_cast<std::uint32_t>(
                                spec.engagers_max - spec.engagers_min + 1)))
                          : 0);
    std::unordered_set<NodeId> chosen;
    std::vector<NodeId> engaged;
    while (static_cast<int>(engaged.size()) < want) {
      NodeId candidate;
      if (art.label == Label::fake && k > 1) {
        if (rng.bernoulli(spec.homophily)) {
          const auto& pool = members[0];
          candidate = pool[rng.index(pool.size())];
        } else {
          const auto& pool =
              members[1 + rng.index(static_cast<std::size_t>(k - 1))];
          candidate = pool[rng.index(pool.size())];
        }
      } else {
        candidate = static_cast<NodeId>(rng.index(static_cast<std::size_t>(n)));
      }
      if (chosen.insert(candidate).second) engaged.push_back(candidate);
    }
    std::sort(engaged.begin(), engaged.end());
    art.engaged_users.reserve(engaged.size());
    for (NodeId u : engaged) art.engaged_users.push_back(synth_user_id(u));

    auto emit_token = [&](std::string& out) {
      char buf[24];
      if (engaged.empty() || rng.bernoulli(spec.text_noise)) {
        std::snprintf(buf, sizeof(buf), "c%04u",
                      rng.below(static_cast<std::uint32_t>(spec.common_vocab)));
      } else {
        const NodeId u = engaged[rng.index(engaged.size())];
        const int c = community[static_cast<std::size_t>(u)];
        std::snprintf(buf, sizeof(buf), "k%d_%03u", c,
                      rng.below(static_cast<std::uint32_t>(spec.community_vocab)));
      }
      if (!out.empty()) out.push_back(' ');
      out += buf;
    };

    const int text_len =
        spec.text_len_min +
        (spec.text_len_max > spec.text_len_min
             ? static_cast<int>(rng.below(static_cast<std::uint32_t>(
                   spec.text_len_max - spec.text_len_min + 1)))
             : 0);
    for (int t = 0; t < text_len; ++t) emit_token(art.text);

    art.tweets.resize(static_cast<std::size_t>(spec.tweets_per_article));
    for (auto& tweet : art.tweets) {
      for (int t = 0; t < spec.tweet_len; ++t) emit_token(tweet);
    }
  }
  return articles;
}

SyntheticData synth_dataset(const SyntheticSpec& spec) {
  SyntheticData data;
  data.followers = gen_graph(spec, data.community);
  data.articles = gen_articles(spec, data.community);
  return data;
}

}  // namespace echograph
