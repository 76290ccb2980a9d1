#pragma once

#include "glomap/types.hpp"

#include <filesystem>
#include <span>
#include <vector>

namespace glomap {

enum class MapperMode { kTrain, kEval };

struct MapperShape {
  Index input = 0;
  Index hidden = 128;
  Index hidden_layers = 3;
  Index output = 2;

  bool operator==(const MapperShape&) const = default;
};

/// Location of one parameter tensor inside Mapper::parameters().
struct ParamBlock {
  enum class Kind { kWeight, kBias, kGamma, kBeta };
  Kind kind;
  Index layer;
  std::size_t offset;
  std::size_t size;
};

/// Fully connected network: (linear -> batch-norm -> ReLU) x hidden_layers,
/// then a final linear layer. All trainable parameters live in one flat
/// buffer; gradients returned by backward() use the same layout.
class Mapper {
 public:
  static constexpr double kBatchNormEps = 1e-5;

  Mapper() = default;
  /// Linear weights and biases ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)),
  /// gamma = 1, beta = 0, running mean 0, running variance 1.
  Mapper(const MapperShape& shape, Rng& rng, double bn_momentum = 0.1);
  /// All parameters zero except gamma = 1.
  static Mapper zeros(const MapperShape& shape, double bn_momentum = 0.1);

  const MapperShape& shape() const { return shape_; }
  MapperMode mode() const { return mode_; }
  void set_mode(MapperMode m) { mode_ = m; }
  double bn_momentum() const { return momentum_; }

  /// Forward pass in the current mode. Caches activations for backward();
  /// train mode uses batch statistics and updates the running statistics.
  Matrix forward(const Matrix& X);

  /// Eval-mode forward that touches no state.
  Matrix predict(const Matrix& X) const;

  /// Parameter gradient of a loss whose gradient w.r.t. the last forward
  /// output is dZ. Optionally writes the input gradient.
  std::vector<double> backward(const Matrix& dZ, Matrix* dX = nullptr) const;

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }
  const std::vector<ParamBlock>& blocks() const { return blocks_; }

  std::span<const double> running_mean(Index layer) const;
  std::span<const double> running_var(Index layer) const;

  void save(const std::filesystem::path& path) const;
  static Mapper load(const std::filesystem::path& path);

 private:
  struct LayerCache {
    Matrix input;     // layer input
    Matrix xhat;      // normalized pre-activation (hidden layers)
    Matrix y;         // gamma * xhat + beta
    Vector inv_std;   // 1 / sqrt(var + eps) actually used
    Vector batch_mean;
    Vector batch_var;  // biased
  };

  void layout();
  Index fan_in(Index layer) const;
  Index fan_out(Index layer) const;
  Index n_linear() const { return shape_.hidden_layers + 1; }
  const double* weight(Index layer) const;
  const double* bias(Index layer) const;
  const double* gamma(Index layer) const;
  const double* beta(Index layer) const;
  Matrix run(const Matrix& X, MapperMode mode, std::vector<LayerCache>* cache) const;

  MapperShape shape_;
  MapperMode mode_ = MapperMode::kTrain;
  double momentum_ = 0.1;
  std::vector<double> params_;
  std::vector<ParamBlock> blocks_;
  std::vector<std::size_t> w_off_, b_off_, g_off_, beta_off_;
  std::vector<std::vector<double>> run_mean_, run_var_;
  std::vector<LayerCache> cache_;
  MapperMode cache_mode_ = MapperMode::kTrain;
};

struct AdamConfig {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double epoch_decay = 0.98;
  Index reset_every = 20;  ///< epochs between moment resets; 0 disables
};

class AdamState {
 public:
  AdamState() = default;
  AdamState(std::size_t n_params, AdamConfig cfg);

  /// Sets the learning rate to lr * decay^epoch and zeroes the moments and
  /// step counter when epoch is a positive multiple of reset_every.
  void begin_epoch(Index epoch);
  void reset();
  void step(std::span<double> params, std::span<const double> grads);

  double lr() const { return lr_; }
  Index steps() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  double lr_ = 0.0;
  Index t_ = 0;
  std::vector<double> m_, v_;
};

}  // namespace glomap
