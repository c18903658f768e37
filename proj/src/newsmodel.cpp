#include "echograph/newsmodel.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "echograph/rng.hpp"

namespace echograph {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

}  // namespace

ArticleVector aggregate_article(const NewsArticle& article,
                                const EmbeddingMatrix& embeddings,
                                const UserTable& users) {
  ArticleVector av;
  av.article_id = article.article_id;
  av.label = article.label;
  av.vec.assign(static_cast<std::size_t>(embeddings.dim), 0.0);
  for (NodeId u : article.engaged_users) {
    if (u < 0 || u >= users.size()) {
      throw std::invalid_argument("aggregate: unknown user index for article '" +
                                  article.article_id + "'");
    }
    if (users.missing[static_cast<std::size_t>(u)]) {
      for (double& v : av.vec) v += -1.0;  // sentinel row
      continue;
    }
    if (u >= embeddings.n_rows) {
      throw std::invalid_argument(
          "aggregate: graph user without embedding row in article '" +
          article.article_id + "'");
    }
    const double* row = embeddings.row(u);
    for (int i = 0; i < embeddings.dim; ++i) av.vec[i] += row[i];
  }
  return av;
}

ClassifierTrainResult train_classifier(const std::vector<ArticleVector>& train,
                                       const ClassifierParams& params) {
  if (train.empty()) {
    throw std::invalid_argument("classifier: empty training set");
  }
  const std::size_t d = train.front().vec.size();
  bool has_fake = false, has_factual = false;
  for (const auto& av : train) {
    if (av.vec.size() != d) {
      throw std::invalid_argument("classifier: inconsistent dimensions");
    }
    (av.label == Label::fake ? has_fake : has_factual) = true;
  }
  if (!has_fake || !has_factual) {
    throw std::invalid_argument("classifier: training set has a single class");
  }
  if (params.epochs < 0) {
    throw std::invalid_argument("classifier: negative epochs");
  }

  ClassifierTrainResult res;
  auto& clf = res.model;
  clf.dim = static_cast<int>(d);
  clf.w.assign(d, 0.0);
  clf.b = 0.0;

  // Standardization from training-split statistics; constant dimensions
  // get unit scale so they pass through as zeros.
  clf.feat_mean.assign(d, 0.0);
  clf.feat_std.assign(d, 0.0);
  const double n = static_cast<double>(train.size());
  for (const auto& av : train) {
    for (std::size_t i = 0; i < d; ++i) clf.feat_mean[i] += av.vec[i];
  }
  for (std::size_t i = 0; i < d; ++i) clf.feat_mean[i] /= n;
  for (const auto& av : train) {
    for (std::size_t i = 0; i < d; ++i) {
      const double c = av.vec[i] - clf.feat_mean[i];
      clf.feat_std[i] += c * c;
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    clf.feat_std[i] = std::sqrt(clf.feat_std[i] / n);
    if (clf.feat_std[i] < 1e-12) clf.feat_std[i] = 1.0;
  }

  std::vector<std::vector<double>> x(train.size());
  std::vector<int> y(train.size());
  for (std::size_t k = 0; k < train.size(); ++k) {
    x[k].resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      x[k][i] = (train[k].vec[i] - clf.feat_mean[i]) / clf.feat_std[i];
    }
    y[k] = train[k].label == Label::fake ? 1 : 0;
  }

  Rng rng(hash_seed(params.seed, 0x434c4635ULL));
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  const double total_updates =
      static_cast<double>(train.size()) * std::max(1, params.epochs);
  double done = 0.0;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t k : order) {
      const double lr =
          std::max(params.lr_final,
                   params.lr_initial * (1.0 - done / total_updates));
      done += 1.0;
      double z = clf.b;
      for (std::size_t i = 0; i < d; ++i) z += clf.w[i] * x[k][i];
      loss_sum += y[k] == 1 ? softplus(-z) : softplus(z);
      const double err = sigmoid(z) - static_cast<double>(y[k]);
      for (std::size_t i = 0; i < d; ++i) clf.w[i] -= lr * err * x[k][i];
      clf.b -= lr * err;
    }
    res.epoch_loss.push_back(loss_sum / n);
  }
  return res;
}

Prediction predict(const DenseClassifier& clf, std::span<const double> vec) {
  if (static_cast<int>(vec.size()) != clf.dim) {
    throw std::invalid_argument("predict: dimension mismatch");
  }
  double z = clf.b;
  for (int i = 0; i < clf.dim; ++i) {
    z += clf.w[i] * (vec[i] - clf.feat_mean[i]) / clf.feat_std[i];
  }
  Prediction p;
  p.probability = sigmoid(z);
  p.label = p.probability >= 0.5 ? Label::fake : Label::factual;
  return p;
}

BceGrad bce_loss_grad(std::span<const double> w, double b,
                      std::span<const double> x, int y) {
  if (w.size() != x.size()) {
    throw std::invalid_argument("bce: dimension mismatch");
  }
  if (y != 0 && y != 1) throw std::invalid_argument("bce: label must be 0/1");
  double z = b;
  for (std::size_t i = 0; i < w.size(); ++i) z += w[i] * x[i];
  BceGrad g;
  g.loss = y == 1 ? softplus(-z) : softplus(z);
  const double err = sigmoid(z) - static_cast<double>(y);
  g.grad_w.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) g.grad_w[i] = err * x[i];
  g.grad_b = err;
  return g;
}

}  // namespace echograph
