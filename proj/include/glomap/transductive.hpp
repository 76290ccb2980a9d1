#pragma once

#include "glomap/affinity.hpp"
#include "glomap/geodesic.hpp"
#include "glomap/schedule.hpp"
#include "glomap/types.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace glomap {

/// Hyperparameters shared by the transductive and inductive optimizers.
struct FitConfig {
  double lambda_e = 1.0;     ///< weight of the repulsive term
  Index n_epoch = 300;
  Index batch = 100;         ///< mini-batch size m
  Index k = 15;              ///< neighbors for the local distance graph
  double clip = 4.0;         ///< per-coordinate gradient clip c
  double alpha0 = 1.0;       ///< initial particle learning rate
  double alpha_decay = 0.98; ///< per-epoch multiplicative decay of alpha
  double tau_start = 1.0;
  double tau_end = 0.1;
  std::optional<double> fixed_tau;  ///< disables tempering when set
  bool neg_approx = false;          ///< treat (1 - mu_ij) as 1 in the repulsive term
  std::optional<Index> ktilde;      ///< truncate D to the K~ nearest entries per row
  double median_target = 3.0;
  Index dim = 2;
  double init_sd = 1e-2;     ///< std of the Gaussian particle initialization
  EmbedKernelParams kernel;
  Seed seed{0};

  void validate() const;
  Schedule tau_schedule() const;
  Schedule alpha_schedule() const;
};

/// Loss split into its attractive (positive) and repulsive (negative) parts.
/// `negative` already includes the lambda_e weight.
struct LossTerms {
  double positive = 0.0;
  double negative = 0.0;
  double total() const { return positive + negative; }
};

/// Full loss: sum over i != j of -mu log q - lambda_e (1 - mu) log(1 - q).
LossTerms loss_full(const Embedding& e, const MembershipTable& mu, double lambda_e,
                    const EmbedKernelParams& k = {}, bool neg_approx = false);

/// Mini-batch estimator: -sum_{i in S} mu_i log q_{i j_i}
///   - lambda_e sum_{i in S} sum_{j in S} (1 - mu_ij) log(1 - q_ij),
/// where pairs with equal point ids contribute nothing.
LossTerms loss_stochastic(std::span<const Index> batch, std::span<const Index> neighbors,
                          const Embedding& e, const MembershipTable& mu, double lambda_e,
                          const EmbedKernelParams& k = {}, bool neg_approx = false);

struct ParticleStepParams {
  double alpha = 1.0;
  double clip = 4.0;
  double lambda_e = 1.0;
  bool neg_approx = false;
  EmbedKernelParams kernel;
};

/// A mini-batch laid over a particle matrix. Slot s pairs the particle at row
/// head_rows[s] (point head_ids[s]) with its sampled neighbor at row
/// tail_rows[s] (point tail_ids[s]). Several slots may share a row.
struct ParticleBatch {
  std::span<const Index> head_rows;
  std::span<const Index> tail_rows;
  std::span<const Index> head_ids;
  std::span<const Index> tail_ids;
};

/// One clipped two-phase SGD step on the particles named by `batch`:
/// first the repulsive term over all head pairs, then the attractive term
/// evaluated at the moved positions. Each summand's gradient is clipped to
/// [-clip, clip] per coordinate, and so is each row's accumulated gradient
/// before it is scaled by alpha. Returns the loss terms as evaluated in the
/// two phases.
LossTerms particle_step(Matrix& positions, const ParticleBatch& batch,
                        const MembershipTable& mu, const ParticleStepParams& p);

/// Uniform with-replacement mini-batch plus one sampled neighbor per entry.
struct MiniBatch {
  std::vector<Index> heads;
  std::vector<Index> tails;
};
MiniBatch sample_minibatch(const MembershipTable& mu, Index m, Rng& rng);

/// ceil(n / m) mini-batch iterations on free particles. Returns the summed loss.
LossTerms sgd_epoch(Embedding& e, const MembershipTable& mu, const FitConfig& cfg, double alpha,
                    Rng& rng);

struct EpochReport {
  Index epoch = 0;
  double alpha = 0.0;
  double tau = 0.0;
  double mean_loss = 0.0;  ///< mean per-iteration stochastic loss
};

/// Called after every epoch with the current particles.
using EpochObserver = std::function<void(const EpochReport&, const Embedding&)>;

struct FitStats {
  double distance_seconds = 0.0;    ///< neighbor graph + shortest paths + normalization
  double membership_seconds = 0.0;  ///< truncation + every per-epoch membership rebuild
  double optimize_seconds = 0.0;
  std::vector<EpochReport> history;
};

struct FitResult {
  Embedding embedding;
  FitStats stats;
};

/// Membership table built from D, owning the truncated copy when K~ is set.
struct PreparedMembership {
  std::unique_ptr<SparseDistanceMatrix> truncated;
  std::unique_ptr<MembershipTable> table;
};
PreparedMembership prepare_membership(const GlobalDistanceMatrix& d, const FitConfig& cfg,
                                      double tau);

/// Normalized global distances for X: shortest-path distances scaled to the
/// configured median.
GlobalDistanceMatrix prepare_distances(const Matrix& X, const FitConfig& cfg);

/// Transductive embedding from raw points.
FitResult fit_transductive(const Matrix& X, const FitConfig& cfg,
                           const EpochObserver& observer = {});

/// Transductive embedding from an already normalized distance matrix.
FitResult fit_transductive(const GlobalDistanceMatrix& d, const FitConfig& cfg,
                           const EpochObserver& observer = {});

}  // namespace glomap
