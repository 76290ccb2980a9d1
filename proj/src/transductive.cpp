#include "glomap/transductive.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <string>

namespace glomap {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double clamp_abs(double v, double c) { return std::clamp(v, -c, c); }

double sq_dist(const double* a, const double* b, Index d) {
  double r2 = 0.0;
  for (Index c = 0; c < d; ++c) r2 += (a[c] - b[c]) * (a[c] - b[c]);
  return r2;
}

// Dense accumulator over the distinct rows touched by one mini-batch.
class RowGradients {
 public:
  RowGradients(std::span<const Index> a, std::span<const Index> b, Index dim) : dim_(dim) {
    rows_.assign(a.begin(), a.end());
    rows_.insert(rows_.end(), b.begin(), b.end());
    std::sort(rows_.begin(), rows_.end());
    rows_.erase(std::unique(rows_.begin(), rows_.end()), rows_.end());
    grad_.assign(rows_.size() * static_cast<std::size_t>(dim), 0.0);
  }

  Index local(Index row) const {
    return std::lower_bound(rows_.begin(), rows_.end(), row) - rows_.begin();
  }
  double* at(Index local_row) { return grad_.data() + local_row * dim_; }

  /// positions[row] -= alpha * clip(accumulated gradient), then resets.
  void apply(Matrix& positions, double alpha, double clip) {
    for (std::size_t t = 0; t < rows_.size(); ++t) {
      double* g = grad_.data() + t * static_cast<std::size_t>(dim_);
      double* p = positions.data() + rows_[t] * dim_;
      for (Index c = 0; c < dim_; ++c) {
        p[c] -= alpha * clamp_abs(g[c], clip);
        g[c] = 0.0;
      }
    }
  }

 private:
  Index dim_;
  std::vector<Index> rows_;
  std::vector<double> grad_;
};

}  // namespace

void FitConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(std::string("invalid configuration: ") + what);
  };
  require(lambda_e >= 0.0, "lambda_e must be >= 0");
  require(n_epoch >= 1, "n_epoch must be >= 1");
  require(batch >= 2, "batch must be >= 2");
  require(k >= 1, "k must be >= 1");
  require(clip > 0.0, "clip must be > 0");
  require(alpha0 >= 0.0, "alpha0 must be >= 0");
  require(alpha_decay > 0.0, "alpha_decay must be > 0");
  require(tau_start > 0.0 && tau_end > 0.0, "tau endpoints must be > 0");
  require(tau_end <= tau_start, "tau_end must not exceed tau_start");
  require(!fixed_tau || *fixed_tau > 0.0, "fixed_tau must be > 0");
  require(!ktilde || *ktilde >= 1, "ktilde must be >= 1");
  require(median_target > 0.0, "median_target must be > 0");
  require(dim >= 1, "dim must be >= 1");
  require(init_sd >= 0.0, "init_sd must be >= 0");
  require(kernel.a > 0.0 && kernel.b > 0.0, "kernel a and b must be > 0");
}

Schedule FitConfig::tau_schedule() const {
  if (fixed_tau) return Schedule::constant(*fixed_tau, n_epoch);
  return Schedule::geometric(tau_start, tau_end, n_epoch);
}

Schedule FitConfig::alpha_schedule() const { return Schedule::decay(alpha0, alpha_decay, n_epoch); }

LossTerms loss_full(const Embedding& e, const MembershipTable& mu, double lambda_e,
                    const EmbedKernelParams& k, bool neg_approx) {
  const Index n = e.size();
  LossTerms out;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double r2 = (e.z.row(i) - e.z.row(j)).squaredNorm();
      const double m = mu.mu(i, j);
      if (m > 0.0) out.positive += m * neg_log_q(r2, k);
      const double w = neg_approx ? 1.0 : 1.0 - m;
      if (w > 0.0) out.negative += lambda_e * w * neg_log_one_minus_q(r2, k);
    }
  }
  return out;
}

LossTerms loss_stochastic(std::span<const Index> batch, std::span<const Index> neighbors,
                          const Embedding& e, const MembershipTable& mu, double lambda_e,
                          const EmbedKernelParams& k, bool neg_approx) {
  if (batch.size() != neighbors.size()) throw Error("batch and neighbor lists differ in size");
  LossTerms out;
  for (std::size_t s = 0; s < batch.size(); ++s) {
    const Index i = batch[s];
    const Index j = neighbors[s];
    const double r2 = (e.z.row(i) - e.z.row(j)).squaredNorm();
    out.positive += mu.row_sum(i) * neg_log_q(r2, k);
  }
  for (Index i : batch) {
    for (Index j : batch) {
      if (i == j) continue;
      const double r2 = (e.z.row(i) - e.z.row(j)).squaredNorm();
      const double w = neg_approx ? 1.0 : 1.0 - mu.mu(i, j);
      if (w > 0.0) out.negative += lambda_e * w * neg_log_one_minus_q(r2, k);
    }
  }
  return out;
}

LossTerms particle_step(Matrix& positions, const ParticleBatch& batch,
                        const MembershipTable& mu, const ParticleStepParams& p) {
  const std::size_t m = batch.head_rows.size();
  if (batch.tail_rows.size() != m || batch.head_ids.size() != m || batch.tail_ids.size() != m) {
    throw Error("particle batch spans differ in length");
  }
  const Index dim = positions.cols();
  const double c = p.clip;
  RowGradients grads(batch.head_rows, batch.tail_rows, dim);
  std::vector<Index> head_local(m), tail_local(m);
  for (std::size_t s = 0; s < m; ++s) {
    head_local[s] = grads.local(batch.head_rows[s]);
    tail_local[s] = grads.local(batch.tail_rows[s]);
  }
  LossTerms loss;

  // Repulsive phase over ordered head pairs; (a, b) and (b, a) are equal
  // summands, so each unordered pair is visited once with weight 2.
  if (p.lambda_e > 0.0) {
    for (std::size_t a = 0; a < m; ++a) {
      const double* za = positions.data() + batch.head_rows[a] * dim;
      for (std::size_t b = a + 1; b < m; ++b) {
        if (batch.head_ids[a] == batch.head_ids[b]) continue;
        const double* zb = positions.data() + batch.head_rows[b] * dim;
        const double weight =
            p.lambda_e * (p.neg_approx ? 1.0 : 1.0 - mu.mu(batch.head_ids[a], batch.head_ids[b]));
        if (weight <= 0.0) continue;
        const double r2 = sq_dist(za, zb, dim);
        loss.negative += 2.0 * weight * neg_log_one_minus_q(r2, p.kernel);
        const double coeff = weight * repulsive_coeff(r2, p.kernel);
        double* ga = grads.at(head_local[a]);
        double* gb = grads.at(head_local[b]);
        for (Index k = 0; k < dim; ++k) {
          const double g = clamp_abs(coeff * (za[k] - zb[k]), c);
          ga[k] += 2.0 * g;
          gb[k] -= 2.0 * g;
        }
      }
    }
    grads.apply(positions, p.alpha, c);
  }

  // Attractive phase at the moved positions.
  for (std::size_t s = 0; s < m; ++s) {
    const double* zi = positions.data() + batch.head_rows[s] * dim;
    const double* zj = positions.data() + batch.tail_rows[s] * dim;
    const double weight = mu.row_sum(batch.head_ids[s]);
    const double r2 = sq_dist(zi, zj, dim);
    loss.positive += weight * neg_log_q(r2, p.kernel);
    const double coeff = weight * attractive_coeff(r2, p.kernel);
    double* gi = grads.at(head_local[s]);
    double* gj = grads.at(tail_local[s]);
    for (Index k = 0; k < dim; ++k) {
      const double g = clamp_abs(coeff * (zi[k] - zj[k]), c);
      gi[k] += g;
      gj[k] -= g;
    }
  }
  grads.apply(positions, p.alpha, c);
  return loss;
}

MiniBatch sample_minibatch(const MembershipTable& mu, Index m, Rng& rng) {
  std::uniform_int_distribution<Index> pick(0, mu.size() - 1);
  MiniBatch mb;
  mb.heads.resize(static_cast<std::size_t>(m));
  mb.tails.resize(static_cast<std::size_t>(m));
  for (auto& h : mb.heads) h = pick(rng);
  for (Index s = 0; s < m; ++s) mb.tails[s] = mu.sample(mb.heads[s], rng);
  return mb;
}

LossTerms sgd_epoch(Embedding& e, const MembershipTable& mu, const FitConfig& cfg, double alpha,
                    Rng& rng) {
  const Index n = e.size();
  const Index iters = (n + cfg.batch - 1) / cfg.batch;
  const ParticleStepParams params{alpha, cfg.clip, cfg.lambda_e, cfg.neg_approx, cfg.kernel};
  LossTerms total;
  for (Index it = 0; it < iters; ++it) {
    const MiniBatch mb = sample_minibatch(mu, cfg.batch, rng);
    const ParticleBatch batch{mb.heads, mb.tails, mb.heads, mb.tails};
    const LossTerms l = particle_step(e.z, batch, mu, params);
    total.positive += l.positive;
    total.negative += l.negative;
  }
  return total;
}

PreparedMembership prepare_membership(const GlobalDistanceMatrix& d, const FitConfig& cfg,
                                      double tau) {
  PreparedMembership p;
  if (cfg.ktilde) {
    const Index kt = std::min(*cfg.ktilde, d.size() - 1);
    p.truncated = std::make_unique<SparseDistanceMatrix>(truncate_ktilde(d, kt));
    p.table = std::make_unique<MembershipTable>(*p.truncated, tau);
  } else {
    p.table = std::make_unique<MembershipTable>(d, tau);
  }
  return p;
}

GlobalDistanceMatrix prepare_distances(const Matrix& X, const FitConfig& cfg) {
  cfg.validate();
  if (X.rows() < cfg.k + 1) {
    throw Error("need at least K+1 = " + std::to_string(cfg.k + 1) + " points, got " +
                std::to_string(X.rows()));
  }
  return normalize_median(global_distances(X, cfg.k), cfg.median_target);
}

FitResult fit_transductive(const Matrix& X, const FitConfig& cfg, const EpochObserver& observer) {
  const auto t0 = Clock::now();
  const GlobalDistanceMatrix d = prepare_distances(X, cfg);
  const double distance_seconds = seconds_since(t0);
  FitResult r = fit_transductive(d, cfg, observer);
  r.stats.distance_seconds = distance_seconds;
  return r;
}

FitResult fit_transductive(const GlobalDistanceMatrix& d, const FitConfig& cfg,
                           const EpochObserver& observer) {
  cfg.validate();
  const Index n = d.size();
  if (n < cfg.batch) {
    throw Error("need at least batch = " + std::to_string(cfg.batch) + " points, got " +
                std::to_string(n));
  }
  FitResult result;
  const Schedule tau = cfg.tau_schedule();
  const Schedule alpha = cfg.alpha_schedule();

  auto t0 = Clock::now();
  PreparedMembership prepared = prepare_membership(d, cfg, tau.value(0));
  MembershipTable* mu = prepared.table.get();
  result.stats.membership_seconds += seconds_since(t0);

  Rng rng = make_rng(cfg.seed);
  std::normal_distribution<double> init(0.0, cfg.init_sd);
  result.embedding.z.resize(n, cfg.dim);
  for (Index k = 0; k < result.embedding.z.size(); ++k) result.embedding.z.data()[k] = init(rng);

  const Index iters = (n + cfg.batch - 1) / cfg.batch;
  for (Index epoch = 0; epoch < cfg.n_epoch; ++epoch) {
    const double tau_t = tau.value(epoch);
    if (epoch > 0 && tau_t != mu->tau()) {
      t0 = Clock::now();
      mu->rebuild(tau_t);
      result.stats.membership_seconds += seconds_since(t0);
    }
    t0 = Clock::now();
    const double alpha_t = alpha.value(epoch);
    const LossTerms l = sgd_epoch(result.embedding, *mu, cfg, alpha_t, rng);
    result.stats.optimize_seconds += seconds_since(t0);
    const EpochReport report{epoch, alpha_t, tau_t, l.total() / static_cast<double>(iters)};
    result.stats.history.push_back(report);
    if (observer) observer(report, result.embedding);
  }
  return result;
}

}  // namespace glomap
