#include "glomap/affinity.hpp"

#include "glomap/parallel.hpp"

#include <algorithm>
#include <string>

namespace glomap {

MembershipTable::MembershipTable(const GlobalDistanceMatrix& d, double tau)
    : dense_(&d), n_(d.size()) {
  rebuild(tau);
}

MembershipTable::MembershipTable(const SparseDistanceMatrix& d, double tau)
    : sparse_(&d), n_(d.n) {
  rebuild(tau);
}

void MembershipTable::rebuild(double tau) {
  if (!(tau > 0.0)) throw Error("temperature must be positive");
  tau_ = tau;
  const double inv_tau = 1.0 / tau;
  row_sums_.resize(static_cast<std::size_t>(n_));
  if (dense_) {
    cdf_.resize(static_cast<std::size_t>(n_ * n_));
    parallel_for(0, n_, [&](Index i) {
      auto row = dense_->row(i);
      double* out = cdf_.data() + i * n_;
      for (Index j = 0; j < n_; ++j) out[j] = std::exp(-row[j] * inv_tau);
      out[i] = 0.0;
      double acc = 0.0;
      for (Index j = 0; j < n_; ++j) {
        acc += out[j];
        out[j] = acc;
      }
      row_sums_[i] = acc;
    });
  } else {
    cdf_.resize(sparse_->values.size());
    parallel_for(0, n_, [&](Index i) {
      double acc = 0.0;
      auto cols = sparse_->cols(i);
      auto vals = sparse_->vals(i);
      double* out = cdf_.data() + sparse_->offsets[i];
      for (std::size_t t = 0; t < cols.size(); ++t) {
        if (cols[t] != i) acc += membership_strength(vals[t], tau);
        out[t] = acc;
      }
      row_sums_[i] = acc;
    });
  }
}

double MembershipTable::mu(Index i, Index j) const {
  if (i == j) return 0.0;
  const double d = dense_ ? (*dense_)(i, j) : (*sparse_)(i, j);
  return membership_strength(d, tau_);
}

Index MembershipTable::sample(Index i, Rng& rng) const {
  const double total = row_sums_[i];
  if (!(total > 0.0)) {
    throw Error("point " + std::to_string(i) + " has no neighbor with positive membership");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double target = unit(rng) * total;
  const double* first;
  const double* last;
  if (dense_) {
    first = cdf_.data() + i * n_;
    last = first + n_;
  } else {
    first = cdf_.data() + sparse_->offsets[i];
    last = cdf_.data() + sparse_->offsets[i + 1];
  }
  const double* it = std::upper_bound(first, last, target);
  if (it == last) {
    // target rounded up to the total: take the last entry with positive mass.
    it = std::lower_bound(first, last, total);
  }
  const auto pos = static_cast<Index>(it - first);
  return dense_ ? pos : sparse_->cols(i)[static_cast<std::size_t>(pos)];
}

MembershipTable membership(const GlobalDistanceMatrix& d, double tau) { return {d, tau}; }
MembershipTable membership(const SparseDistanceMatrix& d, double tau) { return {d, tau}; }

Index sample_neighbor(const MembershipTable& t, Index i, Rng& rng) { return t.sample(i, rng); }

double q_embed(std::span<const double> zi, std::span<const double> zj,
               const EmbedKernelParams& k) {
  double r2 = 0.0;
  for (std::size_t c = 0; c < zi.size(); ++c) r2 += (zi[c] - zj[c]) * (zi[c] - zj[c]);
  return q_from_sq(r2, k);
}

KernelGradients grad_q_terms(std::span<const double> zi, std::span<const double> zj,
                             const EmbedKernelParams& k) {
  const auto d = static_cast<Index>(zi.size());
  Vector diff(d);
  for (Index c = 0; c < d; ++c) diff[c] = zi[c] - zj[c];
  const double r2 = diff.squaredNorm();
  return {attractive_coeff(r2, k) * diff, repulsive_coeff(r2, k) * diff};
}

}  // namespace glomap
