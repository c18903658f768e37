#pragma once

// Skip-gram with negative sampling over walk corpora. The trainer is
// single-threaded and deterministic: identical (corpus, params) give
// bit-identical embeddings. Emitted embeddings are the input (center-role)
// vectors; context vectors are returned alongside for diagnostics.

#include <cstdint>
#include <span>
#include <vector>

#include "echograph/embedding.hpp"
#include "echograph/walks.hpp"

namespace echograph {

struct SgParams {
  int dim = 64;
  int window = 10;
  int negatives_per_pair = 5;
  int epochs = 5;
  double lr_initial = 0.025;
  double lr_final = 0.0001;  // linear decay over all updates
  std::uint64_t seed = 1;
};

// Negative-sampling loss for one (center, context) pair:
//   -log sigmoid(c.x) - sum_k log sigmoid(-c.n_k)
// computed via softplus so no intermediate overflows for |dot| <= 50.
double sg_pair_loss(std::span<const double> center,
                    std::span<const double> context,
                    const std::vector<std::span<const double>>& negatives);

struct SgPairGrad {
  std::vector<double> center;
  std::vector<double> context;
  std::vector<std::vector<double>> negatives;
};

SgPairGrad sg_pair_grad(std::span<const double> center,
                        std::span<const double> context,
                        const std::vector<std::span<const double>>& negatives);

struct SgTrainResult {
  EmbeddingMatrix input;    // the embeddings consumers use
  EmbeddingMatrix context;
  std::vector<double> epoch_loss;  // mean pre-update pair loss per epoch
};

// DeepWalk-style training: materializes all window context pairs from the
// corpus, then runs SGD over a fresh shuffle of them each epoch. Negatives
// are drawn from the unigram^0.75 distribution of corpus node frequencies.
// Input vectors start uniform in [-0.5/dim, 0.5/dim], context vectors at
// zero. epochs == 0 returns the initialization unchanged.
// Throws std::invalid_argument on an empty corpus.
SgTrainResult train_deepwalk(const WalkCorpus& corpus, const SgParams& params);

}  // namespace echograph
