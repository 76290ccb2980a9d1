#include "glomap/inductive.hpp"

#include <chrono>
#include <string>

namespace glomap {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

void InductiveConfig::validate() const {
  fit.validate();
  if (hidden < 1 || hidden_layers < 0) throw Error("invalid configuration: mapper shape");
  if (!(bn_momentum >= 0.0 && bn_momentum <= 1.0)) {
    throw Error("invalid configuration: bn_momentum must lie in [0, 1]");
  }
  if (!(adam.lr > 0.0) || !(adam.epoch_decay > 0.0) || adam.reset_every < 0) {
    throw Error("invalid configuration: Adam settings");
  }
}

InductiveResult fit_inductive(const Matrix& X, const InductiveConfig& cfg,
                              const InductiveObserver& observer) {
  const auto t0 = Clock::now();
  const GlobalDistanceMatrix d = prepare_distances(X, cfg.fit);
  const double distance_seconds = seconds_since(t0);
  InductiveResult r = fit_inductive(X, d, cfg, observer);
  r.stats.distance_seconds = distance_seconds;
  return r;
}

InductiveResult fit_inductive(const Matrix& X, const GlobalDistanceMatrix& d,
                              const InductiveConfig& cfg, const InductiveObserver& observer) {
  cfg.validate();
  const FitConfig& fc = cfg.fit;
  const Index n = d.size();
  if (X.rows() != n) throw Error("data and distance matrix differ in size");
  if (n < fc.batch) {
    throw Error("need at least batch = " + std::to_string(fc.batch) + " points, got " +
                std::to_string(n));
  }
  const Schedule tau = fc.tau_schedule();
  const Schedule alpha = fc.alpha_schedule();
  InductiveResult result;

  auto t0 = Clock::now();
  PreparedMembership prepared = prepare_membership(d, fc, tau.value(0));
  MembershipTable& mu = *prepared.table;
  result.stats.membership_seconds += seconds_since(t0);

  Rng rng = make_rng(fc.seed);
  result.mapper = Mapper({X.cols(), cfg.hidden, cfg.hidden_layers, fc.dim}, rng, cfg.bn_momentum);
  Mapper& mapper = result.mapper;
  mapper.set_mode(MapperMode::kTrain);
  AdamState adam(mapper.parameters().size(), cfg.adam);

  const Index m = fc.batch;
  const Index iters = (n + m - 1) / m;
  std::vector<Index> ids(static_cast<std::size_t>(2 * m));
  std::vector<Index> head_rows(static_cast<std::size_t>(m)), tail_rows(head_rows.size());
  for (Index s = 0; s < m; ++s) {
    head_rows[s] = s;
    tail_rows[s] = m + s;
  }
  Matrix xb(2 * m, X.cols());

  for (Index epoch = 0; epoch < fc.n_epoch; ++epoch) {
    const double tau_t = tau.value(epoch);
    if (epoch > 0 && tau_t != mu.tau()) {
      t0 = Clock::now();
      mu.rebuild(tau_t);
      result.stats.membership_seconds += seconds_since(t0);
    }
    t0 = Clock::now();
    const double alpha_t = alpha.value(epoch);
    adam.begin_epoch(epoch);
    const ParticleStepParams params{alpha_t, fc.clip, fc.lambda_e, fc.neg_approx, fc.kernel};
    LossTerms epoch_loss;
    double regression = 0.0;
    for (Index it = 0; it < iters; ++it) {
      const MiniBatch mb = sample_minibatch(mu, m, rng);
      std::copy(mb.heads.begin(), mb.heads.end(), ids.begin());
      std::copy(mb.tails.begin(), mb.tails.end(), ids.begin() + m);
      for (Index r = 0; r < 2 * m; ++r) xb.row(r) = X.row(ids[r]);

      const Matrix z = mapper.forward(xb);
      Matrix moved = z;
      const std::span<const Index> all(ids);
      const ParticleBatch batch{head_rows, tail_rows, all.first(static_cast<std::size_t>(m)),
                                all.subspan(static_cast<std::size_t>(m))};
      const LossTerms l = particle_step(moved, batch, mu, params);
      epoch_loss.positive += l.positive;
      epoch_loss.negative += l.negative;

      const Matrix diff = z - moved;
      regression += diff.squaredNorm();
      const std::vector<double> grads = mapper.backward(2.0 * diff);
      adam.step(mapper.parameters(), grads);

      if (epoch + 1 == fc.n_epoch && it + 1 == iters) {
        result.last_particles = std::move(moved);
        result.last_ids = ids;
      }
    }
    result.stats.optimize_seconds += seconds_since(t0);
    const double inv_iters = 1.0 / static_cast<double>(iters);
    const InductiveEpochReport report{{epoch, alpha_t, tau_t, epoch_loss.total() * inv_iters},
                                      adam.lr(),
                                      regression * inv_iters};
    result.history.push_back(report);
    result.stats.history.push_back(report.particles);
    if (observer) {
      mapper.set_mode(MapperMode::kEval);
      observer(report, mapper);
      mapper.set_mode(MapperMode::kTrain);
    }
  }
  mapper.set_mode(MapperMode::kEval);
  return result;
}

Embedding transform(const Mapper& m, const Matrix& X_new) {
  if (X_new.rows() > 0 && X_new.cols() != m.shape().input) {
    throw Error("transform: data has " + std::to_string(X_new.cols()) +
                " columns but the mapper expects " + std::to_string(m.shape().input));
  }
  return {m.predict(X_new)};
}

}  // namespace glomap
