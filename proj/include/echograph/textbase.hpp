#pragma once

// Text-only baseline: whitespace tokenizer with URL folding, smoothed
// TF.IDF over a capped vocabulary, and an RBF-kernel SVM trained by SMO
// on the dual (plus a fast logistic-regression fallback).

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "echograph/graph.hpp"

namespace echograph {

// Lowercases, splits on whitespace, folds URL-shaped tokens to "<url>",
// strips surrounding punctuation but keeps a leading '#' or '@'.
std::vector<std::string> tokenize(std::string_view text);

// Article text and all tweets concatenated: the document the baseline
// classifies.
std::vector<std::string> article_tokens(const NewsArticle& article);

struct SparseVec {
  // (column, value), sorted by column, unique.
  std::vector<std::pair<int, double>> entries;
};

double sparse_dot(const SparseVec& a, const SparseVec& b);
double sparse_norm_sq(const SparseVec& a);

struct TfidfModel {
  int n_docs = 0;
  std::vector<std::string> tokens;  // column -> token, ordered by (-df, token)
  std::vector<int> df;
  std::vector<double> idf;          // ln((1 + N) / (1 + df)) + 1
  std::unordered_map<std::string, int> column;
};

// Vocabulary keeps the max_vocab highest-df tokens, ties broken
// lexicographically. Throws std::invalid_argument on an empty corpus.
TfidfModel tfidf_fit(const std::vector<std::vector<std::string>>& docs,
                     int max_vocab = 10000);

// Raw term counts weighted by idf, then L2-normalized. Out-of-vocabulary
// tokens are ignored; a document with no known tokens maps to the zero
// vector.
SparseVec tfidf_transform(const TfidfModel& model,
                          const std::vector<std::string>& doc);

struct SvmParams {
  double C = 10.0;
  double gamma = 0.1;
  double tol = 1e-3;
  int max_passes = 10;      // consecutive full passes with no alpha change
  int max_iter = 20000;     // hard cap on total passes
  std::uint64_t seed = 1;
};

struct SvmModel {
  double gamma = 0.1;
  double bias = 0.0;
  std::vector<SparseVec> support_vectors;
  std::vector<double> dual_coef;  // alpha_i * y_i for each support vector
};

// Labels are +1/-1. Throws std::invalid_argument when fewer than two
// examples, a single class, or non-finite feature values are supplied.
SvmModel svm_train(const std::vector<SparseVec>& x, const std::vector<int>& y,
                   const SvmParams& params);

double svm_decision(const SvmModel& model, const SparseVec& x);
int svm_predict(const SvmModel& model, const SparseVec& x);  // +1 / -1

// Logistic-regression fallback over the same sparse vectors; y is 0/1.
struct SparseLogRegParams {
  int epochs = 50;
  double lr = 0.5;
  std::uint64_t seed = 1;
};

struct SparseLogReg {
  std::vector<double> w;
  double b = 0.0;
};

SparseLogReg logreg_train(const std::vector<SparseVec>& x,
                          const std::vector<int>& y, int dim,
                          const SparseLogRegParams& params);

double logreg_prob(const SparseLogReg& model, const SparseVec& x);

}  // namespace echograph
