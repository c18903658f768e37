#include "echograph/textbase.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "echograph/rng.hpp"

namespace echograph {

namespace {

bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool is_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

bool looks_like_url(std::string_view token) {
  return token.starts_with("http://") || token.starts_with("https://") ||
         token.starts_with("www.");
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) {
      std::string tok(text.substr(i, j - i));
      for (char& c : tok) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      }
      // Strip surrounding punctuation; '#' and '@' survive at the front so
      // hashtags and mentions stay distinct from plain words.
      std::size_t b = 0, e = tok.size();
      while (b < e && is_punct(tok[b]) && tok[b] != '#' && tok[b] != '@') ++b;
      if (looks_like_url(std::string_view(tok).substr(b))) {
        out.emplace_back("<url>");
      } else {
        while (e > b && is_punct(tok[e - 1])) --e;
        if (e > b) out.emplace_back(tok.substr(b, e - b));
      }
    }
    i = j;
  }
  return out;
}

std::vector<std::string> article_tokens(const NewsArticle& article) {
  std::string joined = article.text;
  for (const auto& tweet : article.tweets) {
    joined.push_back(' ');
    joined += tweet;
  }
  return tokenize(joined);
}

double sparse_dot(const SparseVec& a, const SparseVec& b) {
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.entries.size() && j < b.entries.size()) {
    const int ca = a.entries[i].first;
    const int cb = b.entries[j].first;
    if (ca == cb) {
      s += a.entries[i].second * b.entries[j].second;
      ++i;
      ++j;
    } else if (ca < cb) {
      ++i;
    } else {
      ++j;
    }
  }
  return s;
}

double sparse_norm_sq(const SparseVec& a) {
  double s = 0.0;
  for (const auto& [c, v] : a.entries) s += v * v;
  return s;
}

TfidfModel tfidf_fit(const std::vector<std::vector<std::string>>& docs,
                     int max_vocab) {
  if (docs.empty()) throw std::invalid_argument("tfidf: empty corpus");
  if (max_vocab < 1) throw std::invalid_argument("tfidf: max_vocab < 1");

  std::unordered_map<std::string, int> df_map;
  for (const auto& doc : docs) {
    std::unordered_map<std::string, bool> seen;
    for (const auto& tok : doc) {
      if (seen.try_emplace(tok, true).second) ++df_map[tok];
    }
  }

  std::vector<std::pair<std::string, int>> ranked(df_map.begin(), df_map.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > static_cast<std::size_t>(max_vocab)) {
    ranked.resize(static_cast<std::size_t>(max_vocab));
  }

  TfidfModel model;
  model.n_docs = static_cast<int>(docs.size());
  model.tokens.reserve(ranked.size());
  model.df.reserve(ranked.size());
  model.idf.reserve(ranked.size());
  for (std::size_t col = 0; col < ranked.size(); ++col) {
    model.tokens.push_back(ranked[col].first);
    model.df.push_back(ranked[col].second);
    model.idf.push_back(
        std::log((1.0 + model.n_docs) / (1.0 + ranked[col].second)) + 1.0);
    model.column.emplace(ranked[col].first, static_cast<int>(col));
  }
  return model;
}

SparseVec tfidf_transform(const TfidfModel& model,
                          const std::vector<std::string>& doc) {
  std::unordered_map<int, double> counts;
  for (const auto& tok : doc) {
    auto it = model.column.find(tok);
    if (it != model.column.end()) counts[it->second] += 1.0;
  }
  SparseVec vec;
  vec.entries.reserve(counts.size());
  for (const auto& [col, tf] : counts) {
    vec.entries.emplace_back(col, tf * model.idf[static_cast<std::size_t>(col)]);
  }
  std::sort(vec.entries.begin(), vec.entries.end());
  double norm = std::sqrt(sparse_norm_sq(vec));
  if (norm > 0.0) {
    for (auto& [col, v] : vec.entries) v /= norm;
  }
  return vec;
}

namespace {

// Dense RBF kernel matrix; training sets here are article-scale so the
// quadratic cache is cheap and keeps SMO passes O(n) per lookup.
class KernelCache {
 public:
  KernelCache(const std::vector<SparseVec>& x, double gamma) : n_(x.size()) {
    std::vector<double> norms(n_);
    for (std::size_t i = 0; i < n_; ++i) norms[i] = sparse_norm_sq(x[i]);
    k_.resize(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
      k_[i * n_ + i] = 1.0;
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double d2 = norms[i] + norms[j] - 2.0 * sparse_dot(x[i], x[j]);
        const double val = std::exp(-gamma * std::max(d2, 0.0));
        k_[i * n_ + j] = val;
        k_[j * n_ + i] = val;
      }
    }
  }
  double operator()(std::size_t i, std::size_t j) const { return k_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<double> k_;
};

}  // namespace

SvmModel svm_train(const std::vector<SparseVec>& x, const std::vector<int>& y,
                   const SvmParams& params) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("svm: need at least two examples");
  if (y.size() != n) throw std::invalid_argument("svm: label count mismatch");
  bool has_pos = false, has_neg = false;
  for (int label : y) {
    if (label == 1) {
      has_pos = true;
    } else if (label == -1) {
      has_neg = true;
    } else {
      throw std::invalid_argument("svm: labels must be +1/-1");
    }
  }
  if (!has_pos || !has_neg) {
    throw std::invalid_argument("svm: single-class training set");
  }
  for (const auto& v : x) {
    for (const auto& [c, val] : v.entries) {
      if (!std::isfinite(val)) {
        throw std::invalid_argument("svm: non-finite feature value");
      }
    }
  }
  if (params.C <= 0.0 || params.gamma < 0.0) {
    throw std::invalid_argument("svm: C must be > 0 and gamma >= 0");
  }

  const KernelCache kernel(x, params.gamma);
  std::vector<double> alpha(n, 0.0);
  double b = 0.0;
  const double C = params.C;

  auto f = [&](std::size_t i) {
    double s = b;
    for (std::size_t j = 0; j < n; ++j) {
      if (alpha[j] > 0.0) s += alpha[j] * y[j] * kernel(i, j);
    }
    return s;
  };

  Rng rng(hash_seed(params.seed, 0x534d4f31ULL));
  int quiet_passes = 0;
  for (int iter = 0; iter < params.max_iter && quiet_passes < params.max_passes;
       ++iter) {
    int changed = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ei = f(i) - y[i];
      const bool violates = (y[i] * ei < -params.tol && alpha[i] < C) ||
                            (y[i] * ei > params.tol && alpha[i] > 0.0);
      if (!violates) continue;

      std::size_t j = rng.index(n - 1);
      if (j >= i) ++j;
      const double ej = f(j) - y[j];

      const double ai_old = alpha[i];
      const double aj_old = alpha[j];
      double lo, hi;
      if (y[i] != y[j]) {
        lo = std::max(0.0, aj_old - ai_old);
        hi = std::min(C, C + aj_old - ai_old);
      } else {
        lo = std::max(0.0, ai_old + aj_old - C);
        hi = std::min(C, ai_old + aj_old);
      }
      if (lo >= hi) continue;

      const double eta = 2.0 * kernel(i, j) - kernel(i, i) - kernel(j, j);
      if (eta >= 0.0) continue;

      double aj = aj_old - y[j] * (ei - ej) / eta;
      aj = std::clamp(aj, lo, hi);
      if (std::abs(aj - aj_old) < 1e-7) continue;
      const double ai = ai_old + y[i] * y[j] * (aj_old - aj);
      alpha[i] = ai;
      alpha[j] = aj;

      const double b1 = b - ei - y[i] * (ai - ai_old) * kernel(i, i) -
                        y[j] * (aj - aj_old) * kernel(i, j);
      const double b2 = b - ej - y[i] * (ai - ai_old) * kernel(i, j) -
                        y[j] * (aj - aj_old) * kernel(j, j);
      if (ai > 0.0 && ai < C) {
        b = b1;
      } else if (aj > 0.0 && aj < C) {
        b = b2;
      } else {
        b = 0.5 * (b1 + b2);
      }
      ++changed;
    }
    quiet_passes = changed == 0 ? quiet_passes + 1 : 0;
  }

  SvmModel model;
  model.gamma = params.gamma;
  model.bias = b;
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] > 0.0) {
      model.support_vectors.push_back(x[i]);
      model.dual_coef.push_back(alpha[i] * y[i]);
    }
  }
  return model;
}

double svm_decision(const SvmModel& model, const SparseVec& x) {
  const double xn = sparse_norm_sq(x);
  double s = model.bias;
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
    const auto& sv = model.support_vectors[i];
    const double d2 = xn + sparse_norm_sq(sv) - 2.0 * sparse_dot(sv, x);
    s += model.dual_coef[i] * std::exp(-model.gamma * std::max(d2, 0.0));
  }
  return s;
}

int svm_predict(const SvmModel& model, const SparseVec& x) {
  return svm_decision(model, x) >= 0.0 ? 1 : -1;
}

SparseLogReg logreg_train(const std::vector<SparseVec>& x,
                          const std::vector<int>& y, int dim,
                          const SparseLogRegParams& params) {
  if (x.size() != y.size() || x.empty()) {
    throw std::invalid_argument("logreg: bad training set");
  }
  if (dim < 1) throw std::invalid_argument("logreg: dim < 1");
  SparseLogReg model;
  model.w.assign(static_cast<std::size_t>(dim), 0.0);
  model.b = 0.0;

  Rng rng(hash_seed(params.seed, 0x4c4f4752ULL));
  std::vector<std::size_t> order(x.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t k : order) {
      double z = model.b;
      for (const auto& [c, v] : x[k].entries) {
        z += model.w[static_cast<std::size_t>(c)] * v;
      }
      const double err = sigmoid(z) - static_cast<double>(y[k]);
      for (const auto& [c, v] : x[k].entries) {
        model.w[static_cast<std::size_t>(c)] -= params.lr * err * v;
      }
      model.b -= params.lr * err;
    }
  }
  return model;
}

double logreg_prob(const SparseLogReg& model, const SparseVec& x) {
  double z = model.b;
  for (const auto& [c, v] : x.entries) {
    if (c >= 0 && static_cast<std::size_t>(c) < model.w.size()) {
      z += model.w[static_cast<std::size_t>(c)] * v;
    }
  }
  return sigmoid(z);
}

}  // namespace echograph
