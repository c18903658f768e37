#pragma once

// Echo-chamber geometry: PCA of user embeddings, cumulative explained
// variance, 2-D projections tagged by engagement group, and the random
// embedding control.

#include <cstdint>
#include <string>
#include <vector>

#include "echograph/embedding.hpp"

namespace echograph {

struct PcaModel {
  int dim = 0;  // input dimensionality
  int k = 0;    // fitted components
  std::vector<double> mean;                      // length dim
  std::vector<double> components;                // row-major k x dim, orthonormal
  std::vector<double> eigenvalues;               // top k, nonincreasing
  std::vector<double> explained_variance_ratio;  // eigenvalue_i / trace
};

// Mean-centered PCA of the n x d embedding matrix via eigendecomposition
// of the sample covariance (divisor n - 1). Components are sorted by
// eigenvalue, and each is sign-fixed so its largest-magnitude entry is
// positive. Ratios divide by the full covariance trace, so they account
// for all d directions even when k < d.
// Throws std::invalid_argument when k < 1, k > min(n - 1, d), or the
// data has zero total variance.
PcaModel pca_fit(const EmbeddingMatrix& data, int k);

// Cumulative explained variance of the first k fitted components.
// Throws std::invalid_argument when k < 0 or k > model.k.
double cev(const PcaModel& model, int k);

struct ProjectedPoint {
  double x = 0.0;
  double y = 0.0;
  std::string tag;
};

// Projects rows onto the first two components; requires model.k >= 2 and
// one tag per row.
std::vector<ProjectedPoint> project2d(const PcaModel& model,
                                      const EmbeddingMatrix& data,
                                      const std::vector<std::string>& tags);

// Control matrix with entries uniform in [-1, 1].
EmbeddingMatrix random_embeddings(int n_rows, int dim, std::uint64_t seed);

}  // namespace echograph
