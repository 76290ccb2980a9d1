#include "glomap/geodesic.hpp"

#include "glomap/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

namespace glomap {

double LocalDistanceGraph::weight(Index i, Index j) const {
  auto r = row(i);
  auto it = std::lower_bound(r.begin(), r.end(), j,
                             [](const Edge& e, Index v) { return e.to < v; });
  return (it != r.end() && it->to == j) ? it->weight : kInfinity;
}

LocalDistanceGraph LocalDistanceGraph::from_edges(
    Index n, const std::vector<std::pair<Index, Index>>& pairs,
    const std::vector<double>& weights) {
  std::vector<std::vector<Edge>> adj(static_cast<std::size_t>(n));
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    const auto [a, b] = pairs[e];
    if (a == b) continue;
    adj[a].push_back({b, weights[e]});
    adj[b].push_back({a, weights[e]});
  }
  LocalDistanceGraph g;
  g.n = n;
  g.offsets.assign(static_cast<std::size_t>(n) + 1, 0);
  for (Index i = 0; i < n; ++i) {
    auto& row = adj[i];
    std::sort(row.begin(), row.end(), [](const Edge& x, const Edge& y) {
      return x.to < y.to || (x.to == y.to && x.weight > y.weight);
    });
    row.erase(std::unique(row.begin(), row.end(),
                          [](const Edge& x, const Edge& y) { return x.to == y.to; }),
              row.end());
    g.offsets[i + 1] = g.offsets[i] + static_cast<Index>(row.size());
  }
  g.edges.reserve(static_cast<std::size_t>(g.offsets[n]));
  for (auto& row : adj) g.edges.insert(g.edges.end(), row.begin(), row.end());
  return g;
}

GlobalDistanceMatrix::GlobalDistanceMatrix(Index n)
    : n_(n), values_(static_cast<std::size_t>(n * n), kInfinity), components_(n, 0) {
  for (Index i = 0; i < n; ++i) values_[i * n + i] = 0.0;
}

GlobalDistanceMatrix GlobalDistanceMatrix::from_matrix(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error("distance matrix must be square");
  GlobalDistanceMatrix d(m.rows());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      d.at(i, j) = (std::isnan(v) || std::isinf(v)) ? kInfinity : v;
    }
  }
  d.assign_components();
  return d;
}

Matrix GlobalDistanceMatrix::to_matrix() const {
  return Eigen::Map<const Matrix>(values_.data(), n_, n_);
}

void GlobalDistanceMatrix::assign_components() {
  components_.assign(static_cast<std::size_t>(n_), -1);
  Index next = 0;
  for (Index i = 0; i < n_; ++i) {
    if (components_[i] >= 0) continue;
    for (Index j = i; j < n_; ++j) {
      if (components_[j] < 0 && finite(i, j)) components_[j] = next;
    }
    ++next;
  }
}

double SparseDistanceMatrix::operator()(Index i, Index j) const {
  auto c = cols(i);
  auto it = std::lower_bound(c.begin(), c.end(), j);
  if (it == c.end() || *it != j) return i == j ? 0.0 : kInfinity;
  return values[offsets[i] + (it - c.begin())];
}

LocalScales local_scales(const KnnGraph& g) {
  LocalScales s;
  s.sigma.resize(static_cast<std::size_t>(g.n));
  for (Index i = 0; i < g.n; ++i) {
    double sum = 0.0;
    for (double d : g.dists(i)) sum += d * d;
    s.sigma[i] = std::sqrt(sum / static_cast<double>(g.k));
  }
  return s;
}

LocalDistanceGraph rescale_and_symmetrize(const KnnGraph& g, const LocalScales& s) {
  if (static_cast<Index>(s.sigma.size()) != g.n) {
    throw Error("local scales length does not match the neighbor graph");
  }
  std::vector<std::pair<Index, Index>> pairs;
  std::vector<double> weights;
  pairs.reserve(static_cast<std::size_t>(g.n * g.k));
  weights.reserve(static_cast<std::size_t>(g.n * g.k));
  for (Index i = 0; i < g.n; ++i) {
    auto nb = g.neighbors(i);
    auto ds = g.dists(i);
    for (Index t = 0; t < g.k; ++t) {
      const Index j = nb[t];
      const double scale = std::min(s.sigma[i], s.sigma[j]);
      double w = 0.0;
      if (ds[t] > 0.0) {
        if (!(scale > 0.0)) {
          throw Error("zero local scale on an edge of positive length (" + std::to_string(i) +
                      ", " + std::to_string(j) + ")");
        }
        w = ds[t] / scale;
      }
      pairs.emplace_back(i, j);
      weights.push_back(w);
    }
  }
  return LocalDistanceGraph::from_edges(g.n, pairs, weights);
}

GlobalDistanceMatrix shortest_paths(const LocalDistanceGraph& graph) {
  const Index n = graph.n;
  GlobalDistanceMatrix out(n);
  // Path lengths are accumulated exactly in fixed point on a power-of-two grid
  // chosen so that every simple path stays below 2^51 units. The results are
  // then exactly symmetric, and the triangle inequality holds without
  // rounding even when checked in double arithmetic.
  double w_max = 0.0;
  for (const auto& e : graph.edges) w_max = std::max(w_max, e.weight);
  int exponent = 0;
  std::frexp(std::max(w_max * static_cast<double>(std::max<Index>(n - 1, 1)), 1e-300), &exponent);
  const double unit = std::ldexp(1.0, exponent - 51);
  std::vector<std::int64_t> qweights(graph.edges.size());
  for (std::size_t k = 0; k < graph.edges.size(); ++k) {
    // Rounding down keeps every geodesic at or below its direct edge.
    qweights[k] = static_cast<std::int64_t>(std::floor(graph.edges[k].weight / unit));
  }
  constexpr std::int64_t kUnreached = std::numeric_limits<std::int64_t>::max();

  parallel_for(0, n, [&](Index source) {
    using Item = std::pair<std::int64_t, Index>;
    thread_local std::vector<Item> heap_storage;
    thread_local std::vector<std::int64_t> dist;
    heap_storage.clear();
    dist.assign(static_cast<std::size_t>(n), kUnreached);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap(std::greater<>{},
                                                                     std::move(heap_storage));
    dist[source] = 0;
    heap.emplace(0, source);
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      for (Index k = graph.offsets[u]; k < graph.offsets[u + 1]; ++k) {
        const Index v = graph.edges[k].to;
        const std::int64_t cand = d + qweights[k];
        if (cand < dist[v]) {
          dist[v] = cand;
          heap.emplace(cand, v);
        }
      }
    }
    auto row = out.row(source);
    for (Index j = 0; j < n; ++j) {
      row[j] = dist[j] == kUnreached ? kInfinity : static_cast<double>(dist[j]) * unit;
    }
  });
  out.assign_components();
  return out;
}

double finite_median(const GlobalDistanceMatrix& d) {
  const Index n = d.size();
  std::vector<double> finite;
  finite.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (d.finite(i, j)) finite.push_back(d(i, j));
    }
  }
  if (finite.empty()) throw Error("no finite off-diagonal distances to normalize");
  const auto mid = finite.begin() + static_cast<std::ptrdiff_t>((finite.size() - 1) / 2);
  std::nth_element(finite.begin(), mid, finite.end());
  return *mid;
}

GlobalDistanceMatrix normalize_median(GlobalDistanceMatrix d, double target) {
  const double median = finite_median(d);
  if (!(median > 0.0)) throw Error("median of finite distances is zero; cannot normalize");
  const double scale = target / median;
  for (Index i = 0; i < d.size(); ++i) {
    for (double& v : d.row(i)) {
      if (v != kInfinity) v *= scale;
    }
  }
  return d;
}

SparseDistanceMatrix truncate_ktilde(const GlobalDistanceMatrix& d, Index ktilde) {
  const Index n = d.size();
  if (ktilde < 1 || ktilde > n - 1) {
    throw Error("K~ must lie in [1, n-1], got " + std::to_string(ktilde));
  }
  std::vector<std::vector<Index>> keep(static_cast<std::size_t>(n));
  parallel_for(0, n, [&](Index i) {
    std::vector<Index> cand;
    auto row = d.row(i);
    for (Index j = 0; j < n; ++j) {
      if (j != i && row[j] != kInfinity) cand.push_back(j);
    }
    const auto take = std::min<std::size_t>(cand.size(), static_cast<std::size_t>(ktilde));
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(take), cand.end(),
                      [&](Index a, Index b) { return row[a] < row[b] || (row[a] == row[b] && a < b); });
    cand.resize(take);
    keep[i] = std::move(cand);
  });

  std::vector<std::vector<Index>> sym(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j : keep[i]) {
      sym[i].push_back(j);
      sym[j].push_back(i);
    }
  }
  SparseDistanceMatrix out;
  out.n = n;
  out.offsets.assign(static_cast<std::size_t>(n) + 1, 0);
  for (Index i = 0; i < n; ++i) {
    auto& r = sym[i];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    out.offsets[i + 1] = out.offsets[i] + static_cast<Index>(r.size());
  }
  out.columns.reserve(static_cast<std::size_t>(out.offsets[n]));
  out.values.reserve(static_cast<std::size_t>(out.offsets[n]));
  for (Index i = 0; i < n; ++i) {
    for (Index j : sym[i]) {
      out.columns.push_back(j);
      out.values.push_back(d(i, j));
    }
  }
  return out;
}

GlobalDistanceMatrix global_distances(const Matrix& X, Index k) {
  const KnnGraph g = knn_graph_from_points(X, k);
  return shortest_paths(rescale_and_symmetrize(g, local_scales(g)));
}

}  // namespace glomap
