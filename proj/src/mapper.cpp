#include "glomap/mapper.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace glomap {

namespace {

using ConstMatMap = Eigen::Map<const Matrix>;
using RowVecMap = Eigen::Map<const Eigen::RowVectorXd>;

constexpr std::uint32_t kMapperVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "mapper serialization assumes a little-endian host");

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error("truncated mapper file");
  return v;
}

}  // namespace

Mapper::Mapper(const MapperShape& shape, Rng& rng, double bn_momentum)
    : shape_(shape), momentum_(bn_momentum) {
  layout();
  for (Index l = 0; l < n_linear(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in(l)));
    std::uniform_real_distribution<double> u(-bound, bound);
    const std::size_t nw = static_cast<std::size_t>(fan_in(l) * fan_out(l));
    for (std::size_t t = 0; t < nw; ++t) params_[w_off_[l] + t] = u(rng);
    for (Index t = 0; t < fan_out(l); ++t) params_[b_off_[l] + t] = u(rng);
  }
}

Mapper Mapper::zeros(const MapperShape& shape, double bn_momentum) {
  Mapper m;
  m.shape_ = shape;
  m.momentum_ = bn_momentum;
  m.layout();
  return m;
}

void Mapper::layout() {
  if (shape_.input < 1 || shape_.hidden < 1 || shape_.hidden_layers < 0 || shape_.output < 1) {
    throw Error("invalid mapper shape");
  }
  if (!(momentum_ >= 0.0 && momentum_ <= 1.0)) throw Error("batch-norm momentum must lie in [0, 1]");
  params_.clear();
  blocks_.clear();
  w_off_.assign(static_cast<std::size_t>(n_linear()), 0);
  b_off_ = w_off_;
  g_off_.assign(static_cast<std::size_t>(shape_.hidden_layers), 0);
  beta_off_ = g_off_;
  std::size_t off = 0;
  auto add = [&](ParamBlock::Kind kind, Index layer, std::size_t size) {
    blocks_.push_back({kind, layer, off, size});
    off += size;
    return blocks_.back().offset;
  };
  for (Index l = 0; l < n_linear(); ++l) {
    const auto out = static_cast<std::size_t>(fan_out(l));
    w_off_[l] = add(ParamBlock::Kind::kWeight, l, out * static_cast<std::size_t>(fan_in(l)));
    b_off_[l] = add(ParamBlock::Kind::kBias, l, out);
    if (l < shape_.hidden_layers) {
      g_off_[l] = add(ParamBlock::Kind::kGamma, l, out);
      beta_off_[l] = add(ParamBlock::Kind::kBeta, l, out);
    }
  }
  params_.assign(off, 0.0);
  for (Index l = 0; l < shape_.hidden_layers; ++l) {
    std::fill_n(params_.begin() + static_cast<std::ptrdiff_t>(g_off_[l]), shape_.hidden, 1.0);
  }
  run_mean_.assign(static_cast<std::size_t>(shape_.hidden_layers),
                   std::vector<double>(static_cast<std::size_t>(shape_.hidden), 0.0));
  run_var_.assign(static_cast<std::size_t>(shape_.hidden_layers),
                  std::vector<double>(static_cast<std::size_t>(shape_.hidden), 1.0));
  cache_.clear();
}

Index Mapper::fan_in(Index layer) const { return layer == 0 ? shape_.input : shape_.hidden; }
Index Mapper::fan_out(Index layer) const {
  return layer == shape_.hidden_layers ? shape_.output : shape_.hidden;
}
const double* Mapper::weight(Index l) const { return params_.data() + w_off_[l]; }
const double* Mapper::bias(Index l) const { return params_.data() + b_off_[l]; }
const double* Mapper::gamma(Index l) const { return params_.data() + g_off_[l]; }
const double* Mapper::beta(Index l) const { return params_.data() + beta_off_[l]; }

std::span<const double> Mapper::running_mean(Index layer) const { return run_mean_.at(layer); }
std::span<const double> Mapper::running_var(Index layer) const { return run_var_.at(layer); }

Matrix Mapper::run(const Matrix& X, MapperMode mode, std::vector<LayerCache>* cache) const {
  if (X.cols() != shape_.input) {
    throw Error("mapper expects " + std::to_string(shape_.input) + " input columns, got " +
                std::to_string(X.cols()));
  }
  const Index rows = X.rows();
  if (mode == MapperMode::kTrain && rows < 2 && shape_.hidden_layers > 0) {
    throw Error("batch normalization in train mode needs a batch of at least 2 rows");
  }
  if (cache) cache->assign(static_cast<std::size_t>(n_linear()), {});
  Matrix h = X;
  for (Index l = 0; l < n_linear(); ++l) {
    ConstMatMap W(weight(l), fan_out(l), fan_in(l));
    RowVecMap b(bias(l), fan_out(l));
    Matrix a = h * W.transpose();
    a.rowwise() += b;
    if (cache) (*cache)[l].input = std::move(h);
    if (l == shape_.hidden_layers) {
      h = std::move(a);
      break;
    }
    const Index width = fan_out(l);
    Eigen::RowVectorXd mean(width), var(width);
    if (mode == MapperMode::kTrain) {
      mean = a.colwise().mean();
      var = (a.rowwise() - mean).array().square().colwise().sum() / static_cast<double>(rows);
    } else {
      mean = RowVecMap(run_mean_[l].data(), width);
      var = RowVecMap(run_var_[l].data(), width);
    }
    const Eigen::RowVectorXd inv_std = (var.array() + kBatchNormEps).rsqrt();
    Matrix xhat = ((a.rowwise() - mean).array().rowwise() * inv_std.array()).matrix();
    Matrix y = (xhat.array().rowwise() * RowVecMap(gamma(l), width).array()).matrix();
    y.rowwise() += RowVecMap(beta(l), width);
    h = y.cwiseMax(0.0);
    if (cache) {
      (*cache)[l].xhat = std::move(xhat);
      (*cache)[l].y = std::move(y);
      (*cache)[l].inv_std = inv_std.transpose();
      (*cache)[l].batch_mean = mean.transpose();
      (*cache)[l].batch_var = var.transpose();
    }
  }
  return h;
}

Matrix Mapper::forward(const Matrix& X) {
  cache_mode_ = mode_;
  Matrix out = run(X, mode_, &cache_);
  if (mode_ == MapperMode::kTrain) {
    const double rows = static_cast<double>(X.rows());
    for (Index l = 0; l < shape_.hidden_layers; ++l) {
      const LayerCache& c = cache_[l];
      for (Index u = 0; u < shape_.hidden; ++u) {
        run_mean_[l][u] = (1.0 - momentum_) * run_mean_[l][u] + momentum_ * c.batch_mean[u];
        run_var_[l][u] = (1.0 - momentum_) * run_var_[l][u] +
                         momentum_ * c.batch_var[u] * rows / (rows - 1.0);
      }
    }
  }
  return out;
}

Matrix Mapper::predict(const Matrix& X) const {
  if (X.rows() == 0) {
    if (X.cols() != shape_.input && X.cols() != 0) {
      throw Error("mapper expects " + std::to_string(shape_.input) + " input columns, got " +
                  std::to_string(X.cols()));
    }
    return Matrix(0, shape_.output);
  }
  return run(X, MapperMode::kEval, nullptr);
}

std::vector<double> Mapper::backward(const Matrix& dZ, Matrix* dX) const {
  if (cache_.empty()) throw Error("mapper backward called without a cached forward pass");
  const Index rows = cache_.front().input.rows();
  if (dZ.rows() != rows || dZ.cols() != shape_.output) {
    throw Error("output gradient shape does not match the cached forward pass");
  }
  std::vector<double> grads(params_.size(), 0.0);
  Matrix g = dZ;  // gradient w.r.t. the current layer's pre-activation output
  for (Index l = n_linear() - 1; l >= 0; --l) {
    const LayerCache& c = cache_[l];
    const Index width = fan_out(l);
    if (l < shape_.hidden_layers) {
      // g holds dL/dh with h = relu(y).
      Matrix dy = (c.y.array() > 0.0).select(g, 0.0);
      Eigen::Map<Eigen::RowVectorXd>(grads.data() + g_off_[l], width) =
          (dy.array() * c.xhat.array()).colwise().sum();
      Eigen::Map<Eigen::RowVectorXd>(grads.data() + beta_off_[l], width) = dy.colwise().sum();
      const Matrix dxhat = (dy.array().rowwise() * RowVecMap(gamma(l), width).array()).matrix();
      if (cache_mode_ == MapperMode::kTrain) {
        const double inv_n = 1.0 / static_cast<double>(rows);
        const Eigen::RowVectorXd sum_d = dxhat.colwise().sum();
        const Eigen::RowVectorXd sum_dx = (dxhat.array() * c.xhat.array()).colwise().sum();
        Matrix da = dxhat;
        da.rowwise() -= sum_d * inv_n;
        da.array() -= c.xhat.array().rowwise() * (sum_dx.array() * inv_n);
        g = (da.array().rowwise() * c.inv_std.transpose().array()).matrix();
      } else {
        g = (dxhat.array().rowwise() * c.inv_std.transpose().array()).matrix();
      }
    }
    // g now holds dL/da with a = input * W^T + b.
    Eigen::Map<Matrix>(grads.data() + w_off_[l], width, fan_in(l)) = g.transpose() * c.input;
    Eigen::Map<Eigen::RowVectorXd>(grads.data() + b_off_[l], width) = g.colwise().sum();
    if (l > 0 || dX) {
      Matrix next = g * ConstMatMap(weight(l), width, fan_in(l));
      if (l == 0) {
        *dX = std::move(next);
      } else {
        g = std::move(next);
      }
    }
  }
  return grads;
}

void Mapper::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write("GLMQ", 4);
  put(out, kMapperVersion);
  for (Index v : {shape_.input, shape_.hidden, shape_.hidden_layers, shape_.output}) {
    put(out, static_cast<std::uint64_t>(v));
  }
  put(out, momentum_);
  out.write(reinterpret_cast<const char*>(params_.data()),
            static_cast<std::streamsize>(params_.size() * sizeof(double)));
  for (Index l = 0; l < shape_.hidden_layers; ++l) {
    out.write(reinterpret_cast<const char*>(run_mean_[l].data()),
              static_cast<std::streamsize>(run_mean_[l].size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(run_var_[l].data()),
              static_cast<std::streamsize>(run_var_[l].size() * sizeof(double)));
  }
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

Mapper Mapper::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open mapper file '" + path.string() + "'");
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "GLMQ", 4) != 0) {
    throw Error("'" + path.string() + "' is not a GLMQ mapper file");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kMapperVersion) {
    throw Error("unsupported mapper file version " + std::to_string(version));
  }
  MapperShape shape;
  shape.input = static_cast<Index>(get<std::uint64_t>(in));
  shape.hidden = static_cast<Index>(get<std::uint64_t>(in));
  shape.hidden_layers = static_cast<Index>(get<std::uint64_t>(in));
  shape.output = static_cast<Index>(get<std::uint64_t>(in));
  if (shape.input > (1 << 24) || shape.hidden > (1 << 16) || shape.hidden_layers > 64 ||
      shape.output > (1 << 16)) {
    throw Error("mapper file '" + path.string() + "' has an implausible shape");
  }
  Mapper m = zeros(shape, get<double>(in));
  in.read(reinterpret_cast<char*>(m.params_.data()),
          static_cast<std::streamsize>(m.params_.size() * sizeof(double)));
  for (Index l = 0; l < shape.hidden_layers; ++l) {
    in.read(reinterpret_cast<char*>(m.run_mean_[l].data()),
            static_cast<std::streamsize>(m.run_mean_[l].size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(m.run_var_[l].data()),
            static_cast<std::streamsize>(m.run_var_[l].size() * sizeof(double)));
  }
  if (!in) throw Error("truncated mapper file '" + path.string() + "'");
  m.set_mode(MapperMode::kEval);
  return m;
}

AdamState::AdamState(std::size_t n_params, AdamConfig cfg)
    : cfg_(cfg), lr_(cfg.lr), m_(n_params, 0.0), v_(n_params, 0.0) {}

void AdamState::begin_epoch(Index epoch) {
  lr_ = cfg_.lr * std::pow(cfg_.epoch_decay, static_cast<double>(epoch));
  if (cfg_.reset_every > 0 && epoch > 0 && epoch % cfg_.reset_every == 0) reset();
}

void AdamState::reset() {
  std::fill(m_.begin(), m_.end(), 0.0);
  std::fill(v_.begin(), v_.end(), 0.0);
  t_ = 0;
}

void AdamState::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw Error("Adam state and parameter sizes differ");
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    m_[k] = cfg_.beta1 * m_[k] + (1.0 - cfg_.beta1) * grads[k];
    v_[k] = cfg_.beta2 * v_[k] + (1.0 - cfg_.beta2) * grads[k] * grads[k];
    const double mhat = m_[k] / bc1;
    const double vhat = v_[k] / bc2;
    params[k] -= lr_ * mhat / (std::sqrt(vhat) + cfg_.eps);
  }
}

}  // namespace glomap
