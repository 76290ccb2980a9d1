#include "glomap/affinity.hpp"
#include "glomap/data.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace glomap;

namespace {

GlobalDistanceMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Index>(rows.size());
  Matrix m(n, n);
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return GlobalDistanceMatrix::from_matrix(m);
}

// Upper 1 - alpha quantile of chi-square (Wilson-Hilferty).
double chi2_quantile(double df, double z) {
  const double c = 2.0 / (9.0 * df);
  return df * std::pow(1.0 - c + z * std::sqrt(c), 3.0);
}

double sq(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
  return s;
}

}  // namespace

TEST_SUITE("affinity") {

TEST_CASE("membership strength values") {
  CHECK(membership_strength(0.0, 0.7) == 1.0);
  CHECK(membership_strength(std::log(2.0), 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(membership_strength(kInfinity, 1.0) == 0.0);
  const auto d = from_rows({{0, 0, 1}, {0, 0, kInfinity}, {1, kInfinity, 0}});
  const MembershipTable t(d, 1.0);
  CHECK(t.mu(0, 1) == 1.0);
  CHECK(t.mu(0, 0) == 0.0);
  CHECK(t.mu(1, 2) == 0.0);
  CHECK(t.row_sum(0) == doctest::Approx(1.0 + std::exp(-1.0)));
  CHECK_THROWS_AS(MembershipTable(d, 0.0), Error);
}

TEST_CASE("property: halving tau squares mu; monotone in d and tau") {
  Rng rng(1);
  std::uniform_real_distribution<double> ud(0.0, 10.0), ut(0.05, 3.0);
  for (int rep = 0; rep < 1000; ++rep) {
    const double d = ud(rng), tau = ut(rng), d2 = ud(rng), tau2 = ut(rng);
    const double m = membership_strength(d, tau);
    CHECK(membership_strength(d, tau / 2) == doctest::Approx(m * m).epsilon(1e-12));
    if (d < d2) CHECK(membership_strength(d, tau) >= membership_strength(d2, tau));
    if (tau < tau2) CHECK(membership_strength(d, tau) <= membership_strength(d, tau2));
  }
}

TEST_CASE("table invariants on an S-curve") {
  const DataMatrix s = gen_scurve(150, Seed{2});
  const GlobalDistanceMatrix d = normalize_median(global_distances(s.points, 10), 3.0);
  MembershipTable t(d, 1.0);
  for (double tau : {1.0, 0.3, 0.1}) {
    t.rebuild(tau);
    for (Index i = 0; i < 150; ++i) {
      double sum = 0.0;
      for (Index j = 0; j < 150; ++j) {
        const double m = t.mu(i, j);
        CHECK(m >= 0.0);
        CHECK(m <= 1.0);
        CHECK(m == t.mu(j, i));
        sum += m;
      }
      CHECK(std::abs(sum - t.row_sum(i)) < 1e-9);
    }
  }
}

TEST_CASE("sampler with a single positive entry") {
  const auto d = from_rows({{0, 1, kInfinity}, {1, 0, kInfinity}, {kInfinity, kInfinity, 0}});
  const MembershipTable t(d, 1.0);
  Rng rng(3);
  for (int k = 0; k < 200; ++k) CHECK(sample_neighbor(t, 0, rng) == 1);
  CHECK_THROWS_AS(sample_neighbor(t, 2, rng), Error);
}

TEST_CASE("sampler with equal weights splits evenly") {
  const auto d = from_rows({{0, 1, 1}, {1, 0, 2}, {1, 2, 0}});
  const MembershipTable t(d, 1.0);
  Rng rng(4);
  int ones = 0;
  for (int k = 0; k < 10000; ++k) ones += sample_neighbor(t, 0, rng) == 1;
  CHECK(std::abs(ones / 10000.0 - 0.5) < 0.02);
}

TEST_CASE("sampler passes a chi-square goodness-of-fit test") {
  const DataMatrix s = gen_scurve(60, Seed{6});
  const GlobalDistanceMatrix d = normalize_median(global_distances(s.points, 8), 3.0);
  for (bool sparse : {false, true}) {
    const SparseDistanceMatrix tr = truncate_ktilde(d, 12);
    const MembershipTable t = sparse ? MembershipTable(tr, 0.5) : MembershipTable(d, 0.5);
    Rng rng(sparse ? 8 : 7);
    const Index i = 17;
    const int draws = 100000;
    std::vector<int> counts(60, 0);
    for (int k = 0; k < draws; ++k) ++counts[static_cast<std::size_t>(sample_neighbor(t, i, rng))];
    CHECK(counts[i] == 0);
    // Pool cells with small expected counts.
    double chi2 = 0.0, pooled_exp = 0.0, pooled_obs = 0.0;
    int cells = 0;
    for (Index j = 0; j < 60; ++j) {
      const double expected = draws * t.mu(i, j) / t.row_sum(i);
      if (expected == 0.0) {
        CHECK(counts[j] == 0);
        continue;
      }
      if (expected < 5.0) {
        pooled_exp += expected;
        pooled_obs += counts[j];
        continue;
      }
      chi2 += (counts[j] - expected) * (counts[j] - expected) / expected;
      ++cells;
    }
    if (pooled_exp > 0.0) {
      chi2 += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
      ++cells;
    }
    REQUIRE(cells >= 2);
    CHECK(chi2 < chi2_quantile(cells - 1, 2.3263));
  }
}

TEST_CASE("q kernel values") {
  const double a[2] = {0.3, -1.0};
  const double b[2] = {1.3, -1.0};
  CHECK(q_embed(a, a) == 1.0);
  CHECK(q_embed(a, b) == doctest::Approx(1.0 / (1.0 + 1.57694)).epsilon(1e-15));
  double prev = 2.0;
  for (double r = 0.0; r < 20.0; r += 0.05) {
    const double z[1] = {r};
    const double o[1] = {0.0};
    const double q = q_embed(z, o);
    CHECK(q > 0.0);
    CHECK(q <= 1.0);
    CHECK(q < prev);
    prev = q;
  }
}

TEST_CASE("kernel gradients match central differences") {
  Rng rng(12);
  std::normal_distribution<double> g(0.0, 1.5);
  const EmbedKernelParams k;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t dim = 2 + static_cast<std::size_t>(rep % 3);
    std::vector<double> zi(dim), zj(dim);
    for (auto& v : zi) v = g(rng);
    for (auto& v : zj) v = g(rng);
    if (std::sqrt(sq(zi, zj)) < 0.05) continue;
    const KernelGradients grad = grad_q_terms(zi, zj, k);
    auto pos = [&](const std::vector<double>& z) { return neg_log_q(sq(z, zj), k); };
    auto neg = [&](const std::vector<double>& z) { return neg_log_one_minus_q(sq(z, zj), k); };
    for (std::size_t c = 0; c < dim; ++c) {
      const double fp = oracle::central_difference(pos, zi, c, 1e-5);
      const double fn = oracle::central_difference(neg, zi, c, 1e-5);
      CHECK(std::abs(grad.attractive[static_cast<Index>(c)] - fp) <=
            1e-6 * std::max(1e-3, std::abs(fp)));
      CHECK(std::abs(grad.repulsive[static_cast<Index>(c)] - fn) <=
            1e-6 * std::max(1e-3, std::abs(fn)));
    }
    // Antisymmetry under swapping the pair.
    const KernelGradients swapped = grad_q_terms(zj, zi, k);
    CHECK((grad.attractive + swapped.attractive).norm() == doctest::Approx(0.0));
    CHECK((grad.repulsive + swapped.repulsive).norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("distance floor keeps coincident points finite") {
  const double z[2] = {1.0, 1.0};
  const KernelGradients g = grad_q_terms(z, z);
  CHECK(g.attractive.allFinite());
  CHECK(g.repulsive.allFinite());
  CHECK(std::isfinite(neg_log_one_minus_q(0.0, {})));
  CHECK(std::isfinite(attractive_coeff(0.0, {})));
  CHECK(std::isfinite(repulsive_coeff(0.0, {})));
  CHECK(neg_log_q(0.0, {}) == 0.0);
}

}  // TEST_SUITE
