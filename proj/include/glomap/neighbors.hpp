#pragma once

#include "glomap/types.hpp"

#include <span>
#include <vector>

namespace glomap {

/// Exact K-nearest-neighbor graph. Row i lists the K nearest other points of
/// point i in nondecreasing distance order; equal distances are ordered by index.
struct KnnGraph {
  Index n = 0;
  Index k = 0;
  std::vector<Index> indices;     // n*k, row-major
  std::vector<double> distances;  // n*k, row-major

  std::span<const Index> neighbors(Index i) const {
    return {indices.data() + i * k, static_cast<std::size_t>(k)};
  }
  std::span<const double> dists(Index i) const {
    return {distances.data() + i * k, static_cast<std::size_t>(k)};
  }

  /// Throws glomap::Error on a self-loop, a repeated id, a negative or
  /// non-finite distance, or a row that is not sorted.
  void validate() const;
};

/// Symmetric matrix of Euclidean distances between the rows of X.
Matrix pairwise_l2(const Matrix& X);

/// K nearest neighbors from a full distance matrix (diagonal ignored).
KnnGraph knn_graph(const Matrix& distances, Index k);

/// Same result as knn_graph(pairwise_l2(X), k) without holding the n x n matrix.
KnnGraph knn_graph_from_points(const Matrix& X, Index k);

}  // namespace glomap
