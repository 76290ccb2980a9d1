#pragma once

#include "glomap/mapper.hpp"
#include "glomap/transductive.hpp"

#include <functional>

namespace glomap {

struct InductiveConfig {
  FitConfig fit = default_fit();
  Index hidden = 128;
  Index hidden_layers = 3;
  double bn_momentum = 0.1;
  AdamConfig adam;

  static FitConfig default_fit() {
    FitConfig f;
    f.n_epoch = 150;
    return f;
  }
  void validate() const;
};

struct InductiveEpochReport {
  EpochReport particles;          ///< alpha, tau and the mean particle loss
  double learning_rate = 0.0;     ///< Adam step size used in this epoch
  double mean_regression = 0.0;   ///< mean ||Z - Z~||_F^2 per iteration
};

using InductiveObserver = std::function<void(const InductiveEpochReport&, const Mapper&)>;

struct InductiveResult {
  Mapper mapper;  ///< left in eval mode
  FitStats stats;
  std::vector<InductiveEpochReport> history;
  Matrix last_particles;  ///< moved particles of the final iteration
  std::vector<Index> last_ids;
};

/// Particle-based mapper training on normalized distances d computed from X.
InductiveResult fit_inductive(const Matrix& X, const GlobalDistanceMatrix& d,
                              const InductiveConfig& cfg, const InductiveObserver& observer = {});

/// Same, computing the normalized distances first.
InductiveResult fit_inductive(const Matrix& X, const InductiveConfig& cfg,
                              const InductiveObserver& observer = {});

/// Eval-mode embedding of new rows; no optimization.
Embedding transform(const Mapper& m, const Matrix& X_new);

}  // namespace glomap
