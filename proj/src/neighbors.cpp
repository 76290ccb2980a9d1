#include "glomap/neighbors.hpp"

#include "glomap/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace glomap {

namespace {

void check_k(Index n, Index k) {
  if (k < 1 || k > n - 1) {
    throw Error("neighbor count K=" + std::to_string(k) + " must lie in [1, n-1] with n=" +
                std::to_string(n));
  }
}

// Selects the k smallest entries of `row` (skipping `self`) into the output slots.
void select_row(std::span<const double> row, Index self, Index k, std::vector<Index>& scratch,
                Index* out_idx, double* out_dist) {
  scratch.clear();
  for (Index j = 0; j < static_cast<Index>(row.size()); ++j) {
    if (j != self) scratch.push_back(j);
  }
  auto less = [&](Index a, Index b) { return row[a] < row[b] || (row[a] == row[b] && a < b); };
  std::partial_sort(scratch.begin(), scratch.begin() + k, scratch.end(), less);
  for (Index t = 0; t < k; ++t) {
    out_idx[t] = scratch[t];
    out_dist[t] = row[scratch[t]];
  }
}

}  // namespace

void KnnGraph::validate() const {
  if (static_cast<Index>(indices.size()) != n * k ||
      static_cast<Index>(distances.size()) != n * k) {
    throw Error("knn graph storage does not match n*k");
  }
  for (Index i = 0; i < n; ++i) {
    auto nb = neighbors(i);
    auto ds = dists(i);
    for (Index t = 0; t < k; ++t) {
      if (nb[t] == i) throw Error("knn graph has a self loop at " + std::to_string(i));
      if (nb[t] < 0 || nb[t] >= n) throw Error("knn graph index out of range");
      if (!std::isfinite(ds[t]) || ds[t] < 0.0) throw Error("knn graph distance invalid");
      if (t > 0 && ds[t] < ds[t - 1]) throw Error("knn graph row not sorted");
      for (Index s = 0; s < t; ++s) {
        if (nb[s] == nb[t]) throw Error("knn graph repeats a neighbor");
      }
    }
  }
}

Matrix pairwise_l2(const Matrix& X) {
  const Index n = X.rows();
  Matrix d(n, n);
  parallel_for(0, n, [&](Index i) {
    d(i, i) = 0.0;
    for (Index j = i + 1; j < n; ++j) {
      d(i, j) = (X.row(i) - X.row(j)).norm();
    }
  });
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < i; ++j) d(i, j) = d(j, i);
  }
  return d;
}

KnnGraph knn_graph(const Matrix& distances, Index k) {
  const Index n = distances.rows();
  if (distances.cols() != n) throw Error("distance matrix must be square");
  check_k(n, k);
  KnnGraph g{n, k, std::vector<Index>(n * k), std::vector<double>(n * k)};
  parallel_for(0, n, [&](Index i) {
    thread_local std::vector<Index> scratch;
    std::span<const double> row(distances.data() + i * n, static_cast<std::size_t>(n));
    select_row(row, i, k, scratch, g.indices.data() + i * k, g.distances.data() + i * k);
  });
  return g;
}

KnnGraph knn_graph_from_points(const Matrix& X, Index k) {
  const Index n = X.rows();
  check_k(n, k);
  KnnGraph g{n, k, std::vector<Index>(n * k), std::vector<double>(n * k)};
  parallel_for(0, n, [&](Index i) {
    thread_local std::vector<Index> scratch;
    thread_local std::vector<double> row;
    row.resize(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) {
      // Same operand order as pairwise_l2 so both routes agree bit for bit.
      row[j] = i < j ? (X.row(i) - X.row(j)).norm() : (X.row(j) - X.row(i)).norm();
    }
    row[i] = 0.0;
    select_row(row, i, k, scratch, g.indices.data() + i * k, g.distances.data() + i * k);
  });
  return g;
}

}  // namespace glomap
