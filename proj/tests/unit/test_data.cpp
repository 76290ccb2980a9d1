#include "glomap/data.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

using namespace glomap;

TEST_SUITE("data") {

TEST_CASE("scurve shape, formula and determinism") {
  const DataMatrix d = gen_scurve(6000, Seed{1});
  CHECK(d.rows() == 6000);
  CHECK(d.cols() == 3);
  REQUIRE(d.coords2d.has_value());
  for (Index i = 0; i < d.rows(); ++i) {
    const double t = (*d.coords2d)(i, 0);
    const double u = (*d.coords2d)(i, 1);
    CHECK(t >= -1.5 * std::numbers::pi);
    CHECK(t < 1.5 * std::numbers::pi);
    CHECK(u >= 0.0);
    CHECK(u < 2.0);
    CHECK(d.points(i, 0) == doctest::Approx(std::sin(t)).epsilon(1e-15));
    CHECK(d.points(i, 1) == u);
    CHECK(d.points(i, 2) ==
          doctest::Approx(std::sin(t) * (std::cos(t) - 1.0)).epsilon(1e-12));
  }
  const DataMatrix a = gen_scurve(100, Seed{7});
  const DataMatrix b = gen_scurve(100, Seed{7});
  CHECK(a.points == b.points);
  CHECK(*a.coords2d == *b.coords2d);
  CHECK_FALSE(gen_scurve(100, Seed{8}).points == a.points);
}

TEST_CASE("scurve sign variant is injective in t") {
  const DataMatrix d = gen_scurve(500, Seed{3}, ScurveThirdAxis::kSign);
  for (Index i = 0; i < d.rows(); ++i) {
    const double t = (*d.coords2d)(i, 0);
    const double lead = t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0);
    CHECK(d.points(i, 2) == doctest::Approx(lead * (std::cos(t) - 1.0)));
  }
}

TEST_CASE("scurve at t = 0 maps to (0, u, 0)") {
  // sin 0 = 0 and cos 0 - 1 = 0 for either leading factor.
  CHECK(std::sin(0.0) == 0.0);
  CHECK(std::sin(0.0) * (std::cos(0.0) - 1.0) == 0.0);
}

TEST_CASE("severed sphere keeps the band and lies on the unit sphere") {
  const DataMatrix d = gen_severed_sphere(500, Seed{5});
  CHECK(d.rows() == 500);
  for (Index i = 0; i < d.rows(); ++i) {
    const double t = (*d.coords2d)(i, 0);
    CHECK(t > std::numbers::pi / 8);
    CHECK(t < 7 * std::numbers::pi / 8);
    CHECK(d.points.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(gen_severed_sphere(500, Seed{5}).points == d.points);
}

TEST_CASE("eggs sizes and geometry") {
  const DataMatrix d = gen_eggs(Seed{2});
  CHECK(d.rows() == 5982);
  CHECK(d.rows() == kEggsShells * kEggsPointsPerShell + kEggsFlatPoints);
  const LabelVector* part = d.find_labels("part");
  REQUIRE(part != nullptr);
  const auto centers = eggs_hole_centers();
  Index flat = 0;
  for (Index i = 0; i < d.rows(); ++i) {
    const int p = part->values[i];
    if (p == 0) {
      ++flat;
      CHECK(d.points(i, 2) == 0.0);
      CHECK(std::abs(d.points(i, 0)) <= 16.0);
      CHECK(std::abs(d.points(i, 1)) <= 4.0);
      for (const auto& c : centers) {
        CHECK(std::hypot(d.points(i, 0) - c[0], d.points(i, 1) - c[1]) >= 1.0);
      }
    } else {
      const auto& c = centers[static_cast<std::size_t>(p - 1)];
      const double r = std::sqrt(std::pow(d.points(i, 0) - c[0], 2) +
                                 std::pow(d.points(i, 1) - c[1], 2) + std::pow(d.points(i, 2), 2));
      CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(d.points(i, 2) >= 0.0);
      // Projected coordinate stays inside the closed hole.
      CHECK(std::hypot((*d.coords2d)(i, 0) - c[0], (*d.coords2d)(i, 1) - c[1]) <= 1.0 + 1e-12);
    }
  }
  CHECK(flat == 1806);
}

TEST_CASE("hierarchical sizes and labels") {
  const DataMatrix d = gen_hierarchical(48, Seed{4});
  CHECK(d.rows() == 6000);
  CHECK(d.cols() == 50);
  for (const auto& [name, count] :
       std::vector<std::pair<std::string, std::size_t>>{{"macro", 5}, {"meso", 25}, {"micro", 125}}) {
    const LabelVector* lv = d.find_labels(name);
    REQUIRE(lv != nullptr);
    CHECK(std::set<int>(lv->values.begin(), lv->values.end()).size() == count);
  }
  CHECK(gen_hierarchical(48, Seed{4}).points == d.points);
  CHECK(generate("hierarchical", 6000, Seed{4}).points == d.points);
  CHECK_THROWS_AS(generate("hierarchical", 6001, Seed{4}), Error);
}

TEST_CASE("hierarchical label nesting and spread") {
  const DataMatrix d = gen_hierarchical(20, Seed{9});
  const auto& macro = d.find_labels("macro")->values;
  const auto& meso = d.find_labels("meso")->values;
  const auto& micro = d.find_labels("micro")->values;
  for (Index i = 0; i < d.rows(); ++i) {
    CHECK(meso[i] / 5 == macro[i]);
    CHECK(micro[i] / 5 == meso[i]);
  }
  // Within-micro sample variance per coordinate is near 10.
  double ss = 0.0;
  Index count = 0;
  for (int c = 0; c < 125; ++c) {
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(50);
    Index m = 0;
    for (Index i = 0; i < d.rows(); ++i) {
      if (micro[i] == c) {
        mean += d.points.row(i);
        ++m;
      }
    }
    mean /= static_cast<double>(m);
    for (Index i = 0; i < d.rows(); ++i) {
      if (micro[i] == c) {
        ss += (d.points.row(i) - mean).squaredNorm();
        count += 50;
      }
    }
  }
  const double var = ss / static_cast<double>(count - 125 * 50);
  CHECK(var == doctest::Approx(10.0).epsilon(0.05));
}

TEST_CASE("spheres sizes and norms") {
  const DataMatrix d = gen_spheres(10000, Seed{1});
  CHECK(d.rows() == 10000);
  CHECK(d.cols() == 101);
  const auto& cl = d.find_labels("cluster")->values;
  std::vector<Index> counts(11, 0);
  for (int c : cl) ++counts[static_cast<std::size_t>(c)];
  for (int c = 0; c < 10; ++c) CHECK(counts[static_cast<std::size_t>(c)] == 500);
  CHECK(counts[10] == 5000);
  for (Index i = 0; i < d.rows(); ++i) {
    if (cl[i] == 10) CHECK(d.points.row(i).norm() == doctest::Approx(25.0).epsilon(1e-12));
  }
  // Inner points lie on a unit sphere: the centroid of a cluster is close to
  // its center and every point is at distance ~1 from it.
  for (int c = 0; c < 10; ++c) {
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(101);
    for (Index i = 0; i < d.rows(); ++i) {
      if (cl[i] == c) mean += d.points.row(i);
    }
    mean /= 500.0;
    for (Index i = 0; i < d.rows(); ++i) {
      if (cl[i] == c) CHECK((d.points.row(i) - mean).norm() == doctest::Approx(1.0).epsilon(0.1));
    }
  }
  CHECK_THROWS_AS(gen_spheres(10001, Seed{1}), Error);
}

TEST_CASE("unknown generator") { CHECK_THROWS_AS(generate("swissroll", 10, Seed{0}), Error); }

TEST_CASE("validate and subset") {
  DataMatrix d = gen_hierarchical(2, Seed{1});
  CHECK_NOTHROW(d.validate());
  const DataMatrix s = d.subset({3, 1});
  CHECK(s.rows() == 2);
  CHECK(s.points.row(0) == d.points.row(3));
  CHECK(s.labels[0].values[1] == d.labels[0].values[1]);
  d.points(0, 0) = std::nan("");
  CHECK_THROWS_AS(d.validate(), Error);
}

}  // TEST_SUITE
