#include "echograph/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "echograph/rng.hpp"

namespace echograph {

namespace {

// Cyclic Jacobi eigendecomposition of a symmetric matrix (row-major d x d).
// Returns eigenvalues descending with matching eigenvectors as rows of
// `vectors`. Deterministic sweep order; converges quadratically, the sweep
// cap is generous headroom.
void jacobi_eigen(std::vector<double> a, int d, std::vector<double>& values,
                  std::vector<double>& vectors) {
  std::vector<double> v(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i) * d + i] = 1.0;

  auto at = [&](std::vector<double>& m, int r, int c) -> double& {
    return m[static_cast<std::size_t>(r) * d + c];
  };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < d; ++p) {
      for (int q = p + 1; q < d; ++q) off += at(a, p, q) * at(a, p, q);
    }
    double diag = 0.0;
    for (int p = 0; p < d; ++p) diag += at(a, p, p) * at(a, p, p);
    if (off <= 1e-30 * std::max(diag, 1e-300)) break;

    for (int p = 0; p < d; ++p) {
      for (int q = p + 1; q < d; ++q) {
        const double apq = at(a, p, q);
        if (apq == 0.0) continue;
        const double app = at(a, p, p);
        const double aqq = at(a, q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (int i = 0; i < d; ++i) {
          const double aip = at(a, i, p);
          const double aiq = at(a, i, q);
          at(a, i, p) = c * aip - s * aiq;
          at(a, i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < d; ++i) {
          const double api = at(a, p, i);
          const double aqi = at(a, q, i);
          at(a, p, i) = c * api - s * aqi;
          at(a, q, i) = s * api + c * aqi;
        }
        for (int i = 0; i < d; ++i) {
          const double vip = at(v, i, p);
          const double viq = at(v, i, q);
          at(v, i, p) = c * vip - s * viq;
          at(v, i, q) = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) diag[static_cast<std::size_t>(i)] = at(a, i, i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return diag[x] > diag[y]; });

  values.resize(static_cast<std::size_t>(d));
  vectors.assign(static_cast<std::size_t>(d) * d, 0.0);
  for (int rank = 0; rank < d; ++rank) {
    const int col = order[static_cast<std::size_t>(rank)];
    values[static_cast<std::size_t>(rank)] = diag[col];
    for (int i = 0; i < d; ++i) {
      vectors[static_cast<std::size_t>(rank) * d + i] = at(v, i, col);
    }
  }
}

}  // namespace

PcaModel pca_fit(const EmbeddingMatrix& data, int k) {
  const int n = data.n_rows;
  const int d = data.dim;
  if (n < 2 || d < 1) {
    throw std::invalid_argument("pca: need at least two rows");
  }
  if (k < 1 || k > std::min(n - 1, d)) {
    throw std::invalid_argument("pca: k must be in [1, min(n - 1, dim)]");
  }

  PcaModel model;
  model.dim = d;
  model.k = k;
  model.mean.assign(static_cast<std::size_t>(d), 0.0);
  for (int r = 0; r < n; ++r) {
    const double* row = data.row(r);
    for (int i = 0; i < d; ++i) model.mean[static_cast<std::size_t>(i)] += row[i];
  }
  for (double& m : model.mean) m /= static_cast<double>(n);

  // Sample covariance, upper triangle mirrored.
  std::vector<double> cov(static_cast<std::size_t>(d) * d, 0.0);
  std::vector<double> centered(static_cast<std::size_t>(d));
  for (int r = 0; r < n; ++r) {
    const double* row = data.row(r);
    for (int i = 0; i < d; ++i) {
      centered[static_cast<std::size_t>(i)] =
          row[i] - model.mean[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < d; ++i) {
      const double ci = centered[static_cast<std::size_t>(i)];
      for (int j = i; j < d; ++j) {
        cov[static_cast<std::size_t>(i) * d + j] +=
            ci * centered[static_cast<std::size_t>(j)];
      }
    }
  }
  const double denom = static_cast<double>(n - 1);
  double trace = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const double val = cov[static_cast<std::size_t>(i) * d + j] / denom;
      cov[static_cast<std::size_t>(i) * d + j] = val;
      cov[static_cast<std::size_t>(j) * d + i] = val;
    }
    trace += cov[static_cast<std::size_t>(i) * d + i];
  }
  if (trace <= 1e-300) {
    throw std::invalid_argument("pca: data has zero variance");
  }

  std::vector<double> values, vectors;
  jacobi_eigen(std::move(cov), d, values, vectors);

  model.eigenvalues.assign(values.begin(), values.begin() + k);
  for (double& ev : model.eigenvalues) ev = std::max(ev, 0.0);
  model.components.assign(vectors.begin(),
                          vectors.begin() + static_cast<std::size_t>(k) * d);
  model.explained_variance_ratio.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    model.explained_variance_ratio[static_cast<std::size_t>(i)] =
        model.eigenvalues[static_cast<std::size_t>(i)] / trace;
  }

  // Sign convention: largest-magnitude entry of each component positive.
  for (int c = 0; c < k; ++c) {
    double* comp = model.components.data() + static_cast<std::size_t>(c) * d;
    int arg = 0;
    for (int i = 1; i < d; ++i) {
      if (std::abs(comp[i]) > std::abs(comp[arg])) arg = i;
    }
    if (comp[arg] < 0.0) {
      for (int i = 0; i < d; ++i) comp[i] = -comp[i];
    }
  }
  return model;
}

double cev(const PcaModel& model, int k) {
  if (k < 0 || k > model.k) {
    throw std::invalid_argument("cev: k outside fitted component range");
  }
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    sum += model.explained_variance_ratio[static_cast<std::size_t>(i)];
  }
  return sum;
}

std::vector<ProjectedPoint> project2d(const PcaModel& model,
                                      const EmbeddingMatrix& data,
                                      const std::vector<std::string>& tags) {
  if (model.k < 2) {
    throw std::invalid_argument("project2d: model has fewer than 2 components");
  }
  if (data.dim != model.dim) {
    throw std::invalid_argument("project2d: dimension mismatch");
  }
  if (tags.size() != static_cast<std::size_t>(data.n_rows)) {
    throw std::invalid_argument("project2d: one tag per row required");
  }
  std::vector<ProjectedPoint> out(static_cast<std::size_t>(data.n_rows));
  const double* c0 = model.components.data();
  const double* c1 = model.components.data() + model.dim;
  for (int r = 0; r < data.n_rows; ++r) {
    const double* row = data.row(r);
    double x = 0.0, y = 0.0;
    for (int i = 0; i < model.dim; ++i) {
      const double centered = row[i] - model.mean[static_cast<std::size_t>(i)];
      x += centered * c0[i];
      y += centered * c1[i];
    }
    out[static_cast<std::size_t>(r)] = {x, y, tags[static_cast<std::size_t>(r)]};
  }
  return out;
}

EmbeddingMatrix random_embeddings(int n_rows, int dim, std::uint64_t seed) {
  if (n_rows < 0 || dim < 0) {
    throw std::invalid_argument("random_embeddings: negative shape");
  }
  EmbeddingMatrix m(n_rows, dim);
  Rng rng(hash_seed(seed, 0x52414e44ULL));
  for (double& v : m.values) v = rng.range(-1.0, 1.0);
  return m;
}

}  // namespace echograph
