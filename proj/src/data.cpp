#include "glomap/data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace glomap {

namespace {

constexpr double kPi = std::numbers::pi;

// Uniform direction in R^dim via normalized standard Gaussian draws.
template <typename Row>
void random_unit_vector(Row&& out, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  double norm2 = 0.0;
  do {
    for (Index k = 0; k < out.size(); ++k) out[k] = normal(rng);
    norm2 = out.squaredNorm();
  } while (norm2 < 1e-24);
  out /= std::sqrt(norm2);
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(msg);
}

}  // namespace

void DataMatrix::validate() const {
  require(points.rows() >= 1 && points.cols() >= 1, "data matrix must be non-empty");
  require(points.allFinite(), "data matrix contains non-finite entries");
  for (const auto& l : labels) {
    require(static_cast<Index>(l.values.size()) == points.rows(),
            "label vector '" + l.name + "' has wrong length");
  }
  if (coords2d) {
    require(coords2d->rows() == points.rows(), "coords2d row count differs from points");
  }
}

const LabelVector* DataMatrix::find_labels(const std::string& name) const {
  for (const auto& l : labels) {
    if (l.name == name) return &l;
  }
  return nullptr;
}

DataMatrix DataMatrix::subset(const std::vector<Index>& idx) const {
  DataMatrix out;
  const Index m = static_cast<Index>(idx.size());
  out.points.resize(m, cols());
  for (Index r = 0; r < m; ++r) out.points.row(r) = points.row(idx[r]);
  for (const auto& l : labels) {
    LabelVector sub{l.name, {}};
    sub.values.reserve(idx.size());
    for (Index i : idx) sub.values.push_back(l.values[i]);
    out.labels.push_back(std::move(sub));
  }
  if (coords2d) {
    Matrix c(m, coords2d->cols());
    for (Index r = 0; r < m; ++r) c.row(r) = coords2d->row(idx[r]);
    out.coords2d = std::move(c);
  }
  return out;
}

DataMatrix gen_scurve(Index n, Seed seed, ScurveThirdAxis third_axis) {
  require(n >= 1, "gen_scurve: n must be >= 1");
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> ut(-1.5 * kPi, 1.5 * kPi);
  std::uniform_real_distribution<double> uu(0.0, 2.0);

  DataMatrix d;
  d.points.resize(n, 3);
  Matrix coords(n, 2);
  LabelVector bins{"t_bin", std::vector<int>(n)};
  for (Index i = 0; i < n; ++i) {
    const double t = ut(rng);
    const double u = uu(rng);
    const double s = std::sin(t);
    const double lead = third_axis == ScurveThirdAxis::kSine
                            ? s
                            : static_cast<double>((t > 0.0) - (t < 0.0));
    d.points.row(i) << s, u, lead * (std::cos(t) - 1.0);
    coords.row(i) << t, u;
    const int bin = static_cast<int>((t + 1.5 * kPi) / (3.0 * kPi) * 10.0);
    bins.values[i] = std::clamp(bin, 0, 9);
  }
  d.coords2d = std::move(coords);
  d.labels.push_back(std::move(bins));
  return d;
}

DataMatrix gen_severed_sphere(Index n, Seed seed) {
  require(n >= 1, "gen_severed_sphere: n must be >= 1");
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> uu(-0.55, 2.0 * kPi - 0.55);
  std::uniform_real_distribution<double> ut(0.0, 2.0 * kPi);

  DataMatrix d;
  d.points.resize(n, 3);
  Matrix coords(n, 2);
  Index kept = 0;
  while (kept < n) {
    const double u = uu(rng);
    const double t = ut(rng);
    if (!(t > kPi / 8.0 && t < 7.0 * kPi / 8.0)) continue;
    d.points.row(kept) << std::sin(t) * std::cos(u), std::sin(t) * std::sin(u), std::cos(t);
    coords.row(kept) << t, u;
    ++kept;
  }
  d.coords2d = std::move(coords);
  return d;
}

namespace {

constexpr std::array<std::array<double, 2>, kEggsShells> kEggsCenters{{
    {-13, -2}, {-13, 2}, {-8, -2}, {-3, 2}, {2, 2}, {7, -2},
    {12, 2}, {-8, 2}, {-3, -2}, {2, -2}, {7, 2}, {12, -2},
}};

}  // namespace

std::span<const std::array<double, 2>> eggs_hole_centers() { return kEggsCenters; }

DataMatrix gen_eggs(Seed seed) {
  const auto& centers = kEggsCenters;
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> ux(-16.0, 16.0);
  std::uniform_real_distribution<double> uy(-4.0, 4.0);

  const Index n = kEggsFlatPoints + kEggsShells * kEggsPointsPerShell;
  DataMatrix d;
  d.points.resize(n, 3);
  Matrix coords(n, 2);
  LabelVector part{"part", std::vector<int>(n, 0)};

  // Flat region: uniform on the rectangle minus the open unit discs.
  Index row = 0;
  while (row < kEggsFlatPoints) {
    const double x = ux(rng);
    const double y = uy(rng);
    const bool in_hole = std::any_of(centers.begin(), centers.end(), [&](const auto& c) {
      return (x - c[0]) * (x - c[0]) + (y - c[1]) * (y - c[1]) < 1.0;
    });
    if (in_hole) continue;
    d.points.row(row) << x, y, 0.0;
    coords.row(row) << x, y;
    ++row;
  }

  // Half-spheres: uniform on the upper unit hemisphere over each hole. The 2-D
  // coordinate is the azimuthal equidistant projection scaled so the rim maps
  // onto the hole boundary.
  Eigen::Vector3d v;
  for (Index s = 0; s < kEggsShells; ++s) {
    for (Index k = 0; k < kEggsPointsPerShell; ++k) {
      random_unit_vector(v, rng);
      v.z() = std::abs(v.z());
      const double cx = centers[s][0];
      const double cy = centers[s][1];
      d.points.row(row) << cx + v.x(), cy + v.y(), v.z();
      const double planar = std::hypot(v.x(), v.y());
      const double radius = std::acos(std::clamp(v.z(), -1.0, 1.0)) / (kPi / 2.0);
      const double scale = planar > 0.0 ? radius / planar : 0.0;
      coords.row(row) << cx + v.x() * scale, cy + v.y() * scale;
      part.values[row] = static_cast<int>(s) + 1;
      ++row;
    }
  }
  d.coords2d = std::move(coords);
  d.labels.push_back(std::move(part));
  return d;
}

DataMatrix gen_hierarchical(Index points_per_micro, Seed seed) {
  require(points_per_micro >= 1, "gen_hierarchical: points_per_micro must be >= 1");
  constexpr Index kDim = 50;
  constexpr Index kBranch = 5;
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  auto draw = [&](const Vector& mean, double variance) {
    const double sd = std::sqrt(variance);
    Vector v(kDim);
    for (Index k = 0; k < kDim; ++k) v[k] = mean[k] + sd * normal(rng);
    return v;
  };

  const Index n = kBranch * kBranch * kBranch * points_per_micro;
  DataMatrix d;
  d.points.resize(n, kDim);
  LabelVector macro{"macro", std::vector<int>(n)};
  LabelVector meso{"meso", std::vector<int>(n)};
  LabelVector micro{"micro", std::vector<int>(n)};

  const Vector origin = Vector::Zero(kDim);
  Index row = 0;
  for (Index i = 0; i < kBranch; ++i) {
    const Vector macro_center = draw(origin, 100.0 * 100.0);
    for (Index j = 0; j < kBranch; ++j) {
      const Vector meso_center = draw(macro_center, 1000.0);
      for (Index k = 0; k < kBranch; ++k) {
        const Vector micro_center = draw(meso_center, 100.0);
        for (Index p = 0; p < points_per_micro; ++p) {
          d.points.row(row) = draw(micro_center, 10.0).transpose();
          macro.values[row] = static_cast<int>(i);
          meso.values[row] = static_cast<int>(i * kBranch + j);
          micro.values[row] = static_cast<int>((i * kBranch + j) * kBranch + k);
          ++row;
        }
      }
    }
  }
  d.labels = {std::move(macro), std::move(meso), std::move(micro)};
  return d;
}

DataMatrix gen_spheres(Index n, Seed seed) {
  require(n >= 20 && n % 20 == 0, "gen_spheres: n must be a positive multiple of 20");
  constexpr Index kDim = 101;
  constexpr Index kInner = 10;
  constexpr double kOuterRadius = 25.0;
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));

  const Index per_inner = n / 20;
  DataMatrix d;
  d.points.resize(n, kDim);
  LabelVector cluster{"cluster", std::vector<int>(n)};

  Index row = 0;
  Vector dir(kDim);
  for (Index c = 0; c < kInner; ++c) {
    Vector center(kDim);
    for (Index k = 0; k < kDim; ++k) center[k] = normal(rng);
    for (Index p = 0; p < per_inner; ++p) {
      random_unit_vector(dir, rng);
      d.points.row(row) = (center + dir).transpose();
      cluster.values[row] = static_cast<int>(c);
      ++row;
    }
  }
  while (row < n) {
    random_unit_vector(dir, rng);
    d.points.row(row) = (kOuterRadius * dir).transpose();
    cluster.values[row] = static_cast<int>(kInner);
    ++row;
  }
  d.labels.push_back(std::move(cluster));
  return d;
}

DataMatrix generate(const std::string& name, Index n, Seed seed) {
  if (name == "scurve") return gen_scurve(n, seed);
  if (name == "severed_sphere") return gen_severed_sphere(n, seed);
  if (name == "eggs") return gen_eggs(seed);
  if (name == "spheres") return gen_spheres(n, seed);
  if (name == "hierarchical") {
    require(n >= 125 && n % 125 == 0, "hierarchical: n must be a positive multiple of 125");
    return gen_hierarchical(n / 125, seed);
  }
  throw Error("unknown dataset generator '" + name + "'");
}

}  // namespace glomap
