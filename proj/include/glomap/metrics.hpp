#pragma once

#include "glomap/types.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace glomap {

/// Leave-one-out K-nearest-neighbor majority vote accuracy on the rows of Z.
/// Distance ties go to the smaller index, vote ties to the smaller label.
double knn_accuracy(const Matrix& Z, std::span<const int> labels, Index k);

/// Same classifier evaluated for every K in `ks`; neighbor lists are computed once.
std::vector<double> knn_accuracy_sweep(const Matrix& Z, std::span<const int> labels,
                                       std::span<const Index> ks);

/// Accuracy of classifying each query row by majority vote among its K nearest
/// reference rows (no self exclusion).
double knn_transfer_accuracy(const Matrix& reference, std::span<const int> reference_labels,
                             const Matrix& query, std::span<const int> query_labels, Index k);

struct DtmOptions {
  /// Divide each distance set by its maximum before applying the kernel, which
  /// makes the score independent of the embedding's overall scale.
  bool normalize_by_max = false;
};

/// KL divergence between distance-to-measure densities
///   f(x_i) proportional to sum_y exp(-dist(x_i, y)^2 / sigma)
/// computed on X0 (reference coordinates) and on Z.
double dtm_kl(const Matrix& X0, const Matrix& Z, double sigma, DtmOptions opts = {});

struct CorrelationOptions {
  Index max_exact_points = 6000;  ///< above this, a seeded pair sample is used
  Index sample_pairs = 10'000'000;
  Seed seed{0};
};

struct CorrelationResult {
  double value = 0.0;
  Index pairs_used = 0;
  bool sampled = false;
};

/// Pearson correlation between the pairwise Euclidean distances of X0 and Z.
CorrelationResult distance_correlation_report(const Matrix& X0, const Matrix& Z,
                                              CorrelationOptions opts = {});
double distance_correlation(const Matrix& X0, const Matrix& Z);

/// Trustworthiness of the K-neighborhoods of Z with respect to X.
double trustworthiness(const Matrix& X, const Matrix& Z, Index k);

/// Mean silhouette coefficient of Z under the given labels.
double silhouette(const Matrix& Z, std::span<const int> labels);

/// Flat list of named results, serialized as `metric,param,value` CSV.
struct MetricReport {
  struct Entry {
    std::string metric;
    std::string param;
    double value = 0.0;
  };
  std::vector<Entry> entries;

  void add(std::string metric, std::string param, double value);
  const Entry* find(const std::string& metric, const std::string& param) const;
  std::string to_csv() const;
  void write(const std::filesystem::path& path) const;
};

}  // namespace glomap
