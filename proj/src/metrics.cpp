#include "glomap/metrics.hpp"

#include "glomap/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <unordered_map>

namespace glomap {

namespace {

void check_labels(Index n, std::span<const int> labels) {
  if (static_cast<Index>(labels.size()) != n) throw Error("label vector length differs from n");
}

// Indices of the k nearest rows of `ref` to `q` ordered by (distance, index),
// skipping `skip` (use -1 for none).
void nearest_rows(const Matrix& ref, const double* q, Index skip, Index k,
                  std::vector<std::pair<double, Index>>& scratch, std::vector<Index>& out) {
  const Index n = ref.rows();
  const Index dim = ref.cols();
  scratch.clear();
  for (Index j = 0; j < n; ++j) {
    if (j == skip) continue;
    const double* r = ref.data() + j * dim;
    double s = 0.0;
    for (Index c = 0; c < dim; ++c) s += (q[c] - r[c]) * (q[c] - r[c]);
    scratch.emplace_back(s, j);
  }
  const auto kk = std::min<std::size_t>(static_cast<std::size_t>(k), scratch.size());
  std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(kk),
                    scratch.end());
  out.resize(kk);
  for (std::size_t t = 0; t < kk; ++t) out[t] = scratch[t].second;
}

int majority_vote(std::span<const Index> neighbors, std::span<const int> labels) {
  std::map<int, Index> counts;
  for (Index j : neighbors) ++counts[labels[j]];
  int best = 0;
  Index best_count = -1;
  for (const auto& [label, count] : counts) {
    if (count > best_count) {  // map order gives the smaller label on ties
      best = label;
      best_count = count;
    }
  }
  return best;
}

}  // namespace

std::vector<double> knn_accuracy_sweep(const Matrix& Z, std::span<const int> labels,
                                       std::span<const Index> ks) {
  const Index n = Z.rows();
  check_labels(n, labels);
  if (ks.empty()) return {};
  const Index kmax = *std::max_element(ks.begin(), ks.end());
  const Index kmin = *std::min_element(ks.begin(), ks.end());
  if (kmin < 1 || kmax >= n) throw Error("KNN classifier K must lie in [1, n-1]");

  std::vector<Index> neighbors(static_cast<std::size_t>(n * kmax));
  parallel_for(0, n, [&](Index i) {
    thread_local std::vector<std::pair<double, Index>> scratch;
    thread_local std::vector<Index> out;
    nearest_rows(Z, Z.data() + i * Z.cols(), i, kmax, scratch, out);
    std::copy(out.begin(), out.end(), neighbors.begin() + i * kmax);
  });

  std::vector<double> acc;
  for (Index k : ks) {
    Index correct = 0;
    for (Index i = 0; i < n; ++i) {
      std::span<const Index> nb(neighbors.data() + i * kmax, static_cast<std::size_t>(k));
      if (majority_vote(nb, labels) == labels[i]) ++correct;
    }
    acc.push_back(static_cast<double>(correct) / static_cast<double>(n));
  }
  return acc;
}

double knn_accuracy(const Matrix& Z, std::span<const int> labels, Index k) {
  const Index ks[] = {k};
  return knn_accuracy_sweep(Z, labels, ks).front();
}

double knn_transfer_accuracy(const Matrix& reference, std::span<const int> reference_labels,
                             const Matrix& query, std::span<const int> query_labels, Index k) {
  check_labels(reference.rows(), reference_labels);
  check_labels(query.rows(), query_labels);
  if (reference.cols() != query.cols()) throw Error("reference and query dimensions differ");
  if (k < 1 || k > reference.rows()) throw Error("KNN classifier K out of range");
  std::vector<char> hit(static_cast<std::size_t>(query.rows()), 0);
  parallel_for(0, query.rows(), [&](Index i) {
    thread_local std::vector<std::pair<double, Index>> scratch;
    thread_local std::vector<Index> out;
    nearest_rows(reference, query.data() + i * query.cols(), -1, k, scratch, out);
    hit[i] = majority_vote(out, reference_labels) == query_labels[i];
  });
  return static_cast<double>(std::count(hit.begin(), hit.end(), 1)) /
         static_cast<double>(query.rows());
}

double dtm_kl(const Matrix& X0, const Matrix& Z, double sigma, DtmOptions opts) {
  const Index n = X0.rows();
  if (Z.rows() != n) throw Error("dtm_kl: X0 and Z differ in row count");
  if (!(sigma > 0.0)) throw Error("dtm_kl: sigma must be positive");

  auto densities = [&](const Matrix& M) {
    double scale2 = 1.0;
    if (opts.normalize_by_max) {
      double max2 = 0.0;
      for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) max2 = std::max(max2, (M.row(i) - M.row(j)).squaredNorm());
      }
      if (max2 > 0.0) scale2 = 1.0 / max2;
    }
    std::vector<double> f(static_cast<std::size_t>(n), 0.0);
    parallel_for(0, n, [&](Index i) {
      double s = 0.0;
      for (Index j = 0; j < n; ++j) s += std::exp(-(M.row(i) - M.row(j)).squaredNorm() * scale2 / sigma);
      f[i] = s;
    });
    const double total = std::accumulate(f.begin(), f.end(), 0.0);
    for (double& v : f) v /= total;
    return f;
  };
  const auto fx = densities(X0);
  const auto fz = densities(Z);
  double kl = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (fx[i] > 0.0) kl += fx[i] * std::log(fx[i] / fz[i]);
  }
  return std::max(kl, 0.0);
}

CorrelationResult distance_correlation_report(const Matrix& X0, const Matrix& Z,
                                              CorrelationOptions opts) {
  const Index n = X0.rows();
  if (Z.rows() != n) throw Error("distance_correlation: X0 and Z differ in row count");
  if (n < 3) throw Error("distance_correlation needs at least 3 points");

  std::vector<std::pair<Index, Index>> sample;
  const bool sampled = n > opts.max_exact_points;
  if (sampled) {
    Rng rng = make_rng(opts.seed);
    std::uniform_int_distribution<Index> pick(0, n - 1);
    sample.reserve(static_cast<std::size_t>(opts.sample_pairs));
    while (static_cast<Index>(sample.size()) < opts.sample_pairs) {
      const Index i = pick(rng);
      const Index j = pick(rng);
      if (i != j) sample.emplace_back(i, j);
    }
  }
  auto for_each_pair = [&](auto&& f) {
    if (sampled) {
      for (const auto& [i, j] : sample) f(i, j);
    } else {
      for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) f(i, j);
      }
    }
  };

  double sx = 0.0, sz = 0.0;
  Index count = 0;
  for_each_pair([&](Index i, Index j) {
    sx += (X0.row(i) - X0.row(j)).norm();
    sz += (Z.row(i) - Z.row(j)).norm();
    ++count;
  });
  const double mx = sx / static_cast<double>(count);
  const double mz = sz / static_cast<double>(count);
  double cxx = 0.0, czz = 0.0, cxz = 0.0;
  for_each_pair([&](Index i, Index j) {
    const double dx = (X0.row(i) - X0.row(j)).norm() - mx;
    const double dz = (Z.row(i) - Z.row(j)).norm() - mz;
    cxx += dx * dx;
    czz += dz * dz;
    cxz += dx * dz;
  });
  if (!(cxx > 0.0) || !(czz > 0.0)) {
    throw Error("distance_correlation: a distance set has zero variance");
  }
  return {std::clamp(cxz / std::sqrt(cxx * czz), -1.0, 1.0), count, sampled};
}

double distance_correlation(const Matrix& X0, const Matrix& Z) {
  return distance_correlation_report(X0, Z).value;
}

double trustworthiness(const Matrix& X, const Matrix& Z, Index k) {
  const Index n = X.rows();
  if (Z.rows() != n) throw Error("trustworthiness: X and Z differ in row count");
  if (k < 1 || 2 * k >= n) throw Error("trustworthiness requires 1 <= K < n/2");

  std::vector<double> penalty(static_cast<std::size_t>(n), 0.0);
  parallel_for(0, n, [&](Index i) {
    thread_local std::vector<std::pair<double, Index>> scratch;
    thread_local std::vector<Index> embed_nb;
    thread_local std::vector<double> dx;
    nearest_rows(Z, Z.data() + i * Z.cols(), i, k, scratch, embed_nb);

    dx.resize(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) dx[j] = (X.row(i) - X.row(j)).squaredNorm();
    auto before = [&](Index a, Index b) { return dx[a] < dx[b] || (dx[a] == dx[b] && a < b); };

    double p = 0.0;
    for (Index j : embed_nb) {
      // 1-based rank of j among the other points by input distance.
      Index rank = 1;
      for (Index l = 0; l < n; ++l) {
        if (l != i && l != j && before(l, j)) ++rank;
      }
      if (rank > k) p += static_cast<double>(rank - k);
    }
    penalty[i] = p;
  });
  const double total = std::accumulate(penalty.begin(), penalty.end(), 0.0);
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return 1.0 - 2.0 / (nd * kd * (2.0 * nd - 3.0 * kd - 1.0)) * total;
}

double silhouette(const Matrix& Z, std::span<const int> labels) {
  const Index n = Z.rows();
  check_labels(n, labels);
  std::unordered_map<int, Index> cluster_of;
  std::vector<Index> cid(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    auto [it, inserted] = cluster_of.try_emplace(labels[i], static_cast<Index>(cluster_of.size()));
    cid[i] = it->second;
  }
  const Index nc = static_cast<Index>(cluster_of.size());
  if (nc < 2) throw Error("silhouette needs at least two clusters");
  std::vector<Index> sizes(static_cast<std::size_t>(nc), 0);
  for (Index c : cid) ++sizes[c];

  std::vector<double> score(static_cast<std::size_t>(n), 0.0);
  parallel_for(0, n, [&](Index i) {
    if (sizes[cid[i]] <= 1) return;
    std::vector<double> sum(static_cast<std::size_t>(nc), 0.0);
    for (Index j = 0; j < n; ++j) {
      if (j != i) sum[cid[j]] += (Z.row(i) - Z.row(j)).norm();
    }
    const double a = sum[cid[i]] / static_cast<double>(sizes[cid[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (Index c = 0; c < nc; ++c) {
      if (c != cid[i]) b = std::min(b, sum[c] / static_cast<double>(sizes[c]));
    }
    const double denom = std::max(a, b);
    score[i] = denom > 0.0 ? (b - a) / denom : 0.0;
  });
  return std::accumulate(score.begin(), score.end(), 0.0) / static_cast<double>(n);
}

void MetricReport::add(std::string metric, std::string param, double value) {
  entries.push_back({std::move(metric), std::move(param), value});
}

const MetricReport::Entry* MetricReport::find(const std::string& metric,
                                              const std::string& param) const {
  for (const auto& e : entries) {
    if (e.metric == metric && e.param == param) return &e;
  }
  return nullptr;
}

std::string MetricReport::to_csv() const {
  std::string out = "metric,param,value\n";
  char buf[64];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof(buf), "%.17g", e.value);
    out += e.metric + "," + e.param + "," + buf + "\n";
  }
  return out;
}

void MetricReport::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << to_csv();
}

}  // namespace glomap
