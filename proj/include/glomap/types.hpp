#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace glomap {

using Index = Eigen::Index;

/// Dense row-major matrix; one observation per row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// All randomness in the library flows from an explicit seed through this engine.
using Rng = std::mt19937_64;

struct Seed {
  std::uint64_t value = 0;
};

inline Rng make_rng(Seed seed) { return Rng(seed.value); }

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an input file cannot be parsed. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Low-dimensional particles, one row per input point.
struct Embedding {
  Matrix z;

  Index size() const noexcept { return z.rows(); }
  Index dim() const noexcept { return z.cols(); }
};

}  // namespace glomap
