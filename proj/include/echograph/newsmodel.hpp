#pragma once

// Article-level model: an article is represented by the element-wise sum
// of its engaged users' embeddings, then classified fake/factual by a
// single dense logistic layer over standardized vectors.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "echograph/embedding.hpp"
#include "echograph/graph.hpp"

namespace echograph {

struct ArticleVector {
  std::string article_id;
  Label label = Label::factual;
  std::vector<double> vec;
};

// Sum of engaged users' embedding rows; users flagged missing contribute
// the all(-1) sentinel; an empty engagement set gives the zero vector.
// Throws std::invalid_argument when an engaged index is unknown to the
// user table or a graph user has no embedding row.
ArticleVector aggregate_article(const NewsArticle& article,
                                const EmbeddingMatrix& embeddings,
                                const UserTable& users);

struct DenseClassifier {
  int dim = 0;
  std::vector<double> w;
  double b = 0.0;
  // Per-dimension standardization fitted on the training split and stored
  // with the model so inference uses the same transform.
  std::vector<double> feat_mean;
  std::vector<double> feat_std;
};

struct ClassifierParams {
  int epochs = 300;
  double lr_initial = 0.1;
  double lr_final = 0.01;  // linear decay over all updates
  std::uint64_t seed = 1;
};

struct ClassifierTrainResult {
  DenseClassifier model;
  std::vector<double> epoch_loss;  // mean binary cross-entropy per epoch
};

// SGD with per-epoch shuffling on binary cross-entropy; weights start at
// zero, so epochs == 0 predicts 0.5 everywhere. Throws
// std::invalid_argument when the training set is empty, has only one
// class, or mixes dimensions.
ClassifierTrainResult train_classifier(const std::vector<ArticleVector>& train,
                                       const ClassifierParams& params);

struct Prediction {
  double probability = 0.0;        // P(fake)
  Label label = Label::factual;    // fake iff probability >= 0.5
};

Prediction predict(const DenseClassifier& clf, std::span<const double> vec);

// Loss and gradient of the classifier objective on one standardized
// example; exposed for gradient verification.
struct BceGrad {
  double loss = 0.0;
  std::vector<double> grad_w;
  double grad_b = 0.0;
};

BceGrad bce_loss_grad(std::span<const double> w, double b,
                      std::span<const double> x, int y);

}  // namespace echograph
