#pragma once

#include "glomap/geodesic.hpp"
#include "glomap/types.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace glomap {

/// q(r) = 1 / (1 + a r^(2b)) on embedding distances r.
struct EmbedKernelParams {
  double a = 1.57694;
  double b = 0.8951;
};

/// Distances below this are floored when evaluating kernel terms and gradients.
inline constexpr double kDistanceFloor = 1e-3;

/// Membership strengths mu_ij = exp(-D_ij / tau) over a global distance matrix,
/// with row sums and per-row inverse-CDF samplers for mu_{j|i} = mu_ij / mu_i.
///
/// The table keeps a reference to the distance matrix it was built from; that
/// matrix must outlive the table. mu is evaluated on demand from the stored
/// distances, so only the cumulative sums are held.
class MembershipTable {
 public:
  MembershipTable(const GlobalDistanceMatrix& d, double tau);
  MembershipTable(const SparseDistanceMatrix& d, double tau);

  /// Recomputes strengths, row sums and samplers for a new temperature.
  void rebuild(double tau);

  Index size() const noexcept { return n_; }
  double tau() const noexcept { return tau_; }
  bool is_sparse() const noexcept { return sparse_ != nullptr; }

  /// mu_ij; zero on the diagonal and for infinite (or truncated) distances.
  double mu(Index i, Index j) const;
  /// mu_i = sum_j mu_ij.
  double row_sum(Index i) const { return row_sums_[i]; }
  const std::vector<double>& row_sums() const noexcept { return row_sums_; }

  /// Draws j with probability mu_ij / mu_i. Throws if row i has no mass.
  Index sample(Index i, Rng& rng) const;

 private:
  const GlobalDistanceMatrix* dense_ = nullptr;
  const SparseDistanceMatrix* sparse_ = nullptr;
  Index n_ = 0;
  double tau_ = 1.0;
  std::vector<double> row_sums_;
  std::vector<double> cdf_;  // dense: n*n, sparse: aligned with the CSR values
};

/// exp(-d / tau), 0 for infinite d.
inline double membership_strength(double d, double tau) {
  return d == kInfinity ? 0.0 : std::exp(-d / tau);
}

MembershipTable membership(const GlobalDistanceMatrix& d, double tau);
MembershipTable membership(const SparseDistanceMatrix& d, double tau);

Index sample_neighbor(const MembershipTable& t, Index i, Rng& rng);

/// q_ij from a squared embedding distance.
inline double q_from_sq(double r2, const EmbedKernelParams& k) {
  return 1.0 / (1.0 + k.a * std::pow(r2, k.b));
}

/// -log q from a squared distance.
inline double neg_log_q(double r2, const EmbedKernelParams& k) {
  return std::log1p(k.a * std::pow(r2, k.b));
}

/// -log(1 - q) from a squared distance (floored at kDistanceFloor).
inline double neg_log_one_minus_q(double r2, const EmbedKernelParams& k) {
  const double r2f = std::max(r2, kDistanceFloor * kDistanceFloor);
  return std::log1p(1.0 / (k.a * std::pow(r2f, k.b)));
}

/// Coefficient c with d(-log q)/dz_i = c * (z_i - z_j).
inline double attractive_coeff(double r2, const EmbedKernelParams& k) {
  const double r2f = std::max(r2, kDistanceFloor * kDistanceFloor);
  const double p = std::pow(r2f, k.b);
  return 2.0 * k.a * k.b * (p / r2f) / (1.0 + k.a * p);
}

/// Coefficient c with d(-log(1-q))/dz_i = c * (z_i - z_j); always negative.
inline double repulsive_coeff(double r2, const EmbedKernelParams& k) {
  const double r2f = std::max(r2, kDistanceFloor * kDistanceFloor);
  return -2.0 * k.b / (r2f * (1.0 + k.a * std::pow(r2f, k.b)));
}

double q_embed(std::span<const double> zi, std::span<const double> zj,
               const EmbedKernelParams& k = {});

struct KernelGradients {
  Vector attractive;  ///< d(-log q)/dz_i
  Vector repulsive;   ///< d(-log(1-q))/dz_i
};

/// Closed-form gradients of the two kernel terms with respect to z_i.
KernelGradients grad_q_terms(std::span<const double> zi, std::span<const double> zj,
                             const EmbedKernelParams& k = {});

}  // namespace glomap
