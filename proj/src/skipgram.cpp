#include "echograph/skipgram.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "echograph/rng.hpp"

namespace echograph {

namespace {

double dot(const double* a, const double* b, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += a[i] * b[i];
  return s;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 + exp(x)) without overflow.
double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

void check_dims(std::span<const double> center,
                std::span<const double> context,
                const std::vector<std::span<const double>>& negatives) {
  if (center.size() != context.size()) {
    throw std::invalid_argument("sg pair: center/context dimension mismatch");
  }
  for (const auto& n : negatives) {
    if (n.size() != center.size()) {
      throw std::invalid_argument("sg pair: negative dimension mismatch");
    }
  }
}

}  // namespace

double sg_pair_loss(std::span<const double> center,
                    std::span<const double> context,
                    const std::vector<std::span<const double>>& negatives) {
  check_dims(center, context, negatives);
  const int d = static_cast<int>(center.size());
  // -log sigmoid(z) == softplus(-z)
  double loss = softplus(-dot(center.data(), context.data(), d));
  for (const auto& n : negatives) {
    loss += softplus(dot(center.data(), n.data(), d));
  }
  return loss;
}

SgPairGrad sg_pair_grad(std::span<const double> center,
                        std::span<const double> context,
                        const std::vector<std::span<const double>>& negatives) {
  check_dims(center, context, negatives);
  const int d = static_cast<int>(center.size());
  SgPairGrad g;
  g.center.assign(center.size(), 0.0);
  g.context.assign(center.size(), 0.0);
  g.negatives.resize(negatives.size());

  // d/dc [-log sigmoid(c.x)] = (sigmoid(c.x) - 1) x, symmetric in x.
  const double pos = sigmoid(dot(center.data(), context.data(), d)) - 1.0;
  for (int i = 0; i < d; ++i) {
    g.center[i] += pos * context[i];
    g.context[i] = pos * center[i];
  }
  for (std::size_t k = 0; k < negatives.size(); ++k) {
    const auto& n = negatives[k];
    const double neg = sigmoid(dot(center.data(), n.data(), d));
    auto& gn = g.negatives[k];
    gn.assign(center.size(), 0.0);
    for (int i = 0; i < d; ++i) {
      g.center[i] += neg * n[i];
      gn[i] = neg * center[i];
    }
  }
  return g;
}

SgTrainResult train_deepwalk(const WalkCorpus& corpus, const SgParams& params) {
  if (corpus.walks.empty() || corpus.n_nodes <= 0) {
    throw std::invalid_argument("train_deepwalk: empty corpus");
  }
  if (params.dim < 1) throw std::invalid_argument("train_deepwalk: dim < 1");
  if (params.epochs < 0 || params.negatives_per_pair < 0) {
    throw std::invalid_argument("train_deepwalk: negative epochs/negatives");
  }

  const int d = params.dim;
  const NodeId n = corpus.n_nodes;

  SgTrainResult res;
  res.input = EmbeddingMatrix(n, d);
  res.context = EmbeddingMatrix(n, d);

  Rng rng(hash_seed(params.seed, 0x5741564bULL));
  const double half = 0.5 / static_cast<double>(d);
  for (double& v : res.input.values) v = rng.range(-half, half);
  // Context table starts at zero; first updates move it off the origin.

  if (params.epochs == 0) return res;

  // Unigram^0.75 negative distribution over corpus token frequencies.
  std::vector<double> weights(static_cast<std::size_t>(n), 0.0);
  for (const auto& walk : corpus.walks) {
    for (NodeId v : walk) weights[static_cast<std::size_t>(v)] += 1.0;
  }
  for (double& w : weights) {
    if (w > 0.0) w = std::pow(w, 0.75);
  }
  AliasTable negatives(weights);

  std::vector<std::pair<NodeId, NodeId>> pairs =
      context_pairs(corpus, params.window);
  if (pairs.empty()) {
    // Walks exist but are all length one; nothing to optimize.
    res.epoch_loss.assign(static_cast<std::size_t>(params.epochs), 0.0);
    return res;
  }

  const double total_updates =
      static_cast<double>(pairs.size()) * params.epochs;
  double done = 0.0;
  std::vector<double> center_grad(static_cast<std::size_t>(d));

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(pairs);
    double loss_sum = 0.0;
    for (const auto& [c, x] : pairs) {
      const double lr =
          std::max(params.lr_final,
                   params.lr_initial * (1.0 - done / total_updates));
      done += 1.0;

      double* cw = res.input.row(c);
      std::memset(center_grad.data(), 0, sizeof(double) * d);

      // Positive target, then k negatives; each target updates its context
      // row immediately while the center accumulates and applies last.
      {
        double* xw = res.context.row(x);
        const double z = dot(cw, xw, d);
        loss_sum += softplus(-z);
        const double g = (1.0 - sigmoid(z)) * lr;
        for (int i = 0; i < d; ++i) {
          center_grad[i] += g * xw[i];
          xw[i] += g * cw[i];
        }
      }
      for (int k = 0; k < params.negatives_per_pair; ++k) {
        const NodeId t = static_cast<NodeId>(negatives.sample(rng));
        if (t == x) continue;  // never use the positive as its own negative
        double* tw = res.context.row(t);
        const double z = dot(cw, tw, d);
        loss_sum += softplus(z);
        const double g = -sigmoid(z) * lr;
        for (int i = 0; i < d; ++i) {
          center_grad[i] += g * tw[i];
          tw[i] += g * cw[i];
        }
      }
      for (int i = 0; i < d; ++i) cw[i] += center_grad[i];
    }
    res.epoch_loss.push_back(loss_sum / static_cast<double>(pairs.size()));
  }
  return res;
}

}  // namespace echograph
