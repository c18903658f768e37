#pragma once

// Dense node-embedding matrix shared by the embedding trainers and every
// consumer downstream. Row i holds the vector for node index i.

#include <cstddef>
#include <span>
#include <vector>

namespace echograph {

struct EmbeddingMatrix {
  int n_rows = 0;
  int dim = 0;
  std::vector<double> values;  // row-major, n_rows * dim

  EmbeddingMatrix() = default;
  EmbeddingMatrix(int rows, int d)
      : n_rows(rows), dim(d),
        values(static_cast<std::size_t>(rows) * static_cast<std::size_t>(d),
               0.0) {}

  double* row(int i) {
    return values.data() + static_cast<std::size_t>(i) * dim;
  }
  const double* row(int i) const {
    return values.data() + static_cast<std::size_t>(i) * dim;
  }
  std::span<const double> row_span(int i) const {
    return {row(i), static_cast<std::size_t>(dim)};
  }

  // Vector used for users known to articles but absent from the graph.
  static std::vector<double> sentinel(int dim) {
    return std::vector<double>(static_cast<std::size_t>(dim), -1.0);
  }
};

}  // namespace echograph
