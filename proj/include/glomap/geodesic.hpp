#pragma once

#include "glomap/neighbors.hpp"
#include "glomap/types.hpp"

#include <limits>
#include <span>
#include <vector>

namespace glomap {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Root-mean-square distance of each point to its K nearest neighbors.
struct LocalScales {
  std::vector<double> sigma;
};

/// Sparse symmetric graph of locally rescaled distances (CSR, columns sorted).
/// An absent entry means the pair is not locally connected (infinite distance).
struct LocalDistanceGraph {
  struct Edge {
    Index to;
    double weight;
  };

  Index n = 0;
  std::vector<Index> offsets;  // n + 1
  std::vector<Edge> edges;

  std::span<const Edge> row(Index i) const {
    return {edges.data() + offsets[i], static_cast<std::size_t>(offsets[i + 1] - offsets[i])};
  }
  /// Weight of (i, j) or kInfinity when absent.
  double weight(Index i, Index j) const;
  Index edge_count() const noexcept { return static_cast<Index>(edges.size()); }

  /// Builds a graph from an undirected weighted edge list; duplicate pairs keep
  /// the larger weight.
  static LocalDistanceGraph from_edges(Index n, const std::vector<std::pair<Index, Index>>& pairs,
                                       const std::vector<double>& weights);
};

/// Dense symmetric n x n distance matrix. Disconnected pairs hold kInfinity;
/// use finite() rather than comparing against a magnitude.
class GlobalDistanceMatrix {
 public:
  GlobalDistanceMatrix() = default;
  explicit GlobalDistanceMatrix(Index n);

  /// Adopts a square matrix; NaN and +inf entries both mean "disconnected".
  static GlobalDistanceMatrix from_matrix(const Matrix& m);
  /// Copy with kInfinity for disconnected pairs.
  Matrix to_matrix() const;

  Index size() const noexcept { return n_; }
  double operator()(Index i, Index j) const { return values_[i * n_ + j]; }
  double& at(Index i, Index j) { return values_[i * n_ + j]; }
  bool finite(Index i, Index j) const { return (*this)(i, j) != kInfinity; }

  std::span<const double> row(Index i) const {
    return {values_.data() + i * n_, static_cast<std::size_t>(n_)};
  }
  std::span<double> row(Index i) {
    return {values_.data() + i * n_, static_cast<std::size_t>(n_)};
  }

  /// Connected-component id per point (0-based, in order of first appearance).
  const std::vector<Index>& components() const noexcept { return components_; }
  /// Recomputes component ids from the finite pattern.
  void assign_components();

 private:
  Index n_ = 0;
  std::vector<double> values_;
  std::vector<Index> components_;
};

/// Row-wise truncated distances (the fast variant): per row the K~ smallest
/// finite entries, symmetrized by union. Missing entries are infinite.
struct SparseDistanceMatrix {
  Index n = 0;
  std::vector<Index> offsets;  // n + 1
  std::vector<Index> columns;  // sorted within each row
  std::vector<double> values;

  std::span<const Index> cols(Index i) const {
    return {columns.data() + offsets[i], static_cast<std::size_t>(offsets[i + 1] - offsets[i])};
  }
  std::span<const double> vals(Index i) const {
    return {values.data() + offsets[i], static_cast<std::size_t>(offsets[i + 1] - offsets[i])};
  }
  /// Stored distance of (i, j) or kInfinity.
  double operator()(Index i, Index j) const;
  Index nonzeros() const noexcept { return static_cast<Index>(columns.size()); }
};

/// sigma_i = sqrt(mean_k d(i, k)^2) over the K nearest neighbors.
LocalScales local_scales(const KnnGraph& g);

/// Local distance graph: an edge joins i and j when j is among the K nearest
/// neighbors of i or vice versa, with weight ||x_i - x_j|| / min(sigma_i, sigma_j).
/// A zero scale is allowed only on zero-length edges (which get weight 0).
LocalDistanceGraph rescale_and_symmetrize(const KnnGraph& g, const LocalScales& s);

/// All-pairs shortest paths: one binary-heap Dijkstra per source. Edge weights
/// are rounded down to a power-of-two grid (relative step about n * 2^-51 of the
/// largest weight) and summed exactly, so the result is exactly symmetric.
GlobalDistanceMatrix shortest_paths(const LocalDistanceGraph& graph);

/// Lower median of the finite off-diagonal entries (upper triangle).
double finite_median(const GlobalDistanceMatrix& d);

/// Scales every finite entry by target / finite_median(d).
GlobalDistanceMatrix normalize_median(GlobalDistanceMatrix d, double target = 3.0);

/// Keeps the ktilde smallest finite off-diagonal entries per row (ties by
/// index), then symmetrizes by union.
SparseDistanceMatrix truncate_ktilde(const GlobalDistanceMatrix& d, Index ktilde);

/// Full global distance construction from raw points (no normalization).
GlobalDistanceMatrix global_distances(const Matrix& X, Index k);

}  // namespace glomap
