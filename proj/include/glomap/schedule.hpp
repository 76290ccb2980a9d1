#pragma once

#include "glomap/types.hpp"

namespace glomap {

/// Per-epoch parameter schedule with value(0) = start and value(length-1) = end.
struct Schedule {
  enum class Kind { kGeometric, kLinear, kConstant };

  Kind kind = Kind::kConstant;
  double start = 1.0;
  double end = 1.0;
  Index length = 1;

  double value(Index t) const;

  static Schedule geometric(double start, double end, Index length);
  static Schedule linear(double start, double end, Index length);
  static Schedule constant(double value, Index length);
  /// start * rate^t, expressed as a geometric schedule.
  static Schedule decay(double start, double rate, Index length);
};

}  // namespace glomap
