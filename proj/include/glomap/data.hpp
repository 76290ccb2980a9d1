#pragma once

#include "glomap/types.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace glomap {

/// One level of integer class labels (e.g. "macro", "meso", "micro").
struct LabelVector {
  std::string name;
  std::vector<int> values;
};

/// Input points with optional labels and optional generating 2-D coordinates.
struct DataMatrix {
  Matrix points;
  std::vector<LabelVector> labels;
  std::optional<Matrix> coords2d;

  Index rows() const noexcept { return points.rows(); }
  Index cols() const noexcept { return points.cols(); }

  /// Throws glomap::Error if any invariant (shape, finiteness, label length) is violated.
  void validate() const;

  /// Returns the label vector with the given name or nullptr.
  const LabelVector* find_labels(const std::string& name) const;

  /// Rows `idx` of everything (points, labels, coords) in the given order.
  DataMatrix subset(const std::vector<Index>& idx) const;
};

// Synthetic generators. Every generator is a pure function of its arguments.

/// Leading factor of the S-curve's third coordinate, (lead) * (cos t - 1).
enum class ScurveThirdAxis {
  kSine,  ///< sin(t): curve passes through the axis x = z = 0 at t = -pi, 0, pi.
  kSign,  ///< sign(t): the injective S-shape.
};

/// S-curve in R^3: (sin t, u, lead(t) * (cos t - 1)) with t ~ U(-3pi/2, 3pi/2), u ~ U(0, 2).
/// coords2d = (t, u); labels "t_bin" = t quantized into 10 bins.
DataMatrix gen_scurve(Index n, Seed seed, ScurveThirdAxis third_axis = ScurveThirdAxis::kSine);

/// Unit sphere with the polar caps removed (pi/8 < t < 7pi/8). coords2d = (t, u).
DataMatrix gen_severed_sphere(Index n, Seed seed);

/// Flat rectangle with 12 holes closed by half-spheres: 1806 + 12 * 348 = 5982 points.
DataMatrix gen_eggs(Seed seed);

inline constexpr Index kEggsFlatPoints = 1806;
inline constexpr Index kEggsPointsPerShell = 348;
inline constexpr Index kEggsShells = 12;

/// Centers of the 12 removed unit discs, in the order of the "part" labels 1..12.
std::span<const std::array<double, 2>> eggs_hole_centers();

/// 5 macro x 5 meso x 5 micro Gaussian clusters in R^50.
/// Labels "macro", "meso", "micro" hold globally unique ids per level.
DataMatrix gen_hierarchical(Index points_per_micro, Seed seed);

/// Ten unit spheres around random centers plus a radius-25 shell, in R^101.
/// `n` must be divisible by 20. Label "cluster": 0..9 inner, 10 outer shell.
DataMatrix gen_spheres(Index n, Seed seed);

/// Dispatches on a generator name: scurve, severed_sphere, eggs, hierarchical, spheres.
/// For hierarchical `n` must be a multiple of 125 (points per micro cluster = n / 125).
DataMatrix generate(const std::string& name, Index n, Seed seed);

}  // namespace glomap
