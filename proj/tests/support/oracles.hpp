#pragma once

// Independent reference implementations used only by tests. They favor
// directness over speed and share no code paths with the library.

#include "glomap/geodesic.hpp"
#include "glomap/mapper.hpp"
#include "glomap/neighbors.hpp"
#include "glomap/types.hpp"

#include <functional>
#include <vector>

namespace oracle {

using glomap::Index;
using glomap::Matrix;

/// O(n^3) all-pairs shortest paths. w(i, j) = +inf means no edge.
Matrix floyd_warshall(Matrix w);

/// Dense adjacency (0 diagonal, +inf for missing edges) of a local graph.
Matrix adjacency(const glomap::LocalDistanceGraph& g);

/// Merged distance over the n star-shaped local metrics d_a(a, y) = |a - y| / sigma_a
/// (y a K-neighbor of a): pairwise fmax over the local metrics, then the
/// chain infimum by Floyd-Warshall. Requires mutual neighborhoods and n <= 64.
Matrix coequalizer_oracle(const Matrix& X, const glomap::KnnGraph& g,
                          const glomap::LocalScales& s);

bool mutual_neighborhoods(const glomap::KnnGraph& g);

/// Straightforward double loop.
Matrix naive_pairwise(const Matrix& X);

/// Expected value of f(S, J) over S uniform in [0, n)^m (with replacement) and
/// J_k ~ P(j | S_k) = mu(S_k, j) / sum_j mu(S_k, j), by exhaustive enumeration.
struct Expectation {
  double positive = 0.0;
  double negative = 0.0;
};
Expectation enumerate_minibatches(
    const Matrix& mu, Index m,
    const std::function<std::pair<double, double>(const std::vector<Index>&,
                                                  const std::vector<Index>&)>& f);

/// Trustworthiness from complete input-space rank matrices.
double trustworthiness_bruteforce(const Matrix& X, const Matrix& Z, Index k);

/// Central difference of f at x along coordinate c.
double central_difference(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x, std::size_t c, double h);

/// Random sparse undirected graph with positive weights as a dense adjacency.
Matrix random_sparse_graph(Index n, double edge_prob, glomap::Rng& rng);

/// Points whose K-nearest-neighbor relation is symmetric: rings (K even) or
/// two-ring prisms (K odd) with smoothly varying spacing, randomly rotated
/// into R^p, optionally two well separated copies. Retries until mutual.
Matrix mutual_knn_instance(Index max_n, Index p, Index k, glomap::Rng& rng);

/// Loop-based network forward reading parameters through Mapper::blocks().
/// Train mode uses biased batch statistics, eval mode the running statistics.
/// min_abs_hidden receives the smallest |ReLU input| over all hidden units.
Matrix mapper_forward(const glomap::Mapper& m, const Matrix& X, bool train,
                      double* min_abs_hidden = nullptr);

Matrix random_matrix(Index rows, Index cols, glomap::Rng& rng, double scale = 1.0);

}  // namespace oracle
