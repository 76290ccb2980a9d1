#include "glomap/schedule.hpp"

#include <algorithm>
#include <cmath>

namespace glomap {

double Schedule::value(Index t) const {
  if (length <= 1 || kind == Kind::kConstant) return start;
  t = std::clamp<Index>(t, 0, length - 1);
  if (t == length - 1) return end;
  const double frac = static_cast<double>(t) / static_cast<double>(length - 1);
  if (kind == Kind::kLinear) return start + (end - start) * frac;
  return start * std::pow(end / start, frac);
}

Schedule Schedule::geometric(double start, double end, Index length) {
  if (!(start > 0.0) || !(end > 0.0)) throw Error("geometric schedule needs positive endpoints");
  return {Kind::kGeometric, start, end, std::max<Index>(length, 1)};
}

Schedule Schedule::linear(double start, double end, Index length) {
  return {Kind::kLinear, start, end, std::max<Index>(length, 1)};
}

Schedule Schedule::constant(double value, Index length) {
  return {Kind::kConstant, value, value, std::max<Index>(length, 1)};
}

Schedule Schedule::decay(double start, double rate, Index length) {
  length = std::max<Index>(length, 1);
  if (start == 0.0) return constant(0.0, length);
  return geometric(start, start * std::pow(rate, static_cast<double>(length - 1)), length);
}

}  // namespace glomap
