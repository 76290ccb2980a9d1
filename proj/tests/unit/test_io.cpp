#include "glomap/geodesic.hpp"
#include "glomap/io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace glomap;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "glomap_unit_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("3x2 round trip is exact") {
  DataMatrix m;
  m.points.resize(3, 2);
  m.points << 0.1, -2.5e-300, 1.0 / 3.0, 12345.678, -0.0, 6.02214076e23;
  const fs::path p = temp_path("rt.csv");
  save_matrix(p, m);
  const DataMatrix back = load_matrix(p);
  CHECK(back.points == m.points);
  CHECK(back.labels.empty());
  CHECK_FALSE(back.coords2d.has_value());
}

TEST_CASE("labels and coords survive a round trip") {
  DataMatrix m = gen_scurve(50, Seed{3});
  const DataMatrix back = parse_matrix_csv(format_matrix_csv(m));
  CHECK(back.points == m.points);
  REQUIRE(back.coords2d.has_value());
  CHECK(*back.coords2d == *m.coords2d);
  REQUIRE(back.labels.size() == 1);
  CHECK(back.labels[0].name == m.labels[0].name);
  CHECK(back.labels[0].values == m.labels[0].values);
}

TEST_CASE("hand-written header with a label column") {
  const DataMatrix m = parse_matrix_csv("x0,x1,label:macro\n1,2,0\n3,4,1\n");
  CHECK(m.cols() == 2);
  CHECK(m.rows() == 2);
  REQUIRE(m.labels.size() == 1);
  CHECK(m.labels[0].name == "macro");
  CHECK(m.labels[0].values == std::vector<int>{0, 1});
  CHECK(m.points(1, 0) == 3.0);
}

TEST_CASE("ragged row names its line") {
  try {
    parse_matrix_csv("a,b\n1,2\n3\n4,5\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("non-numeric cell and non-integer label are rejected") {
  CHECK_THROWS_AS(parse_matrix_csv("a,b\n1,x\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix_csv("a,label:l\n1,0.5\n"), ParseError);
  try {
    parse_matrix_csv("a\n1\n2\nfoo\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
}

TEST_CASE("missing file is an error") {
  CHECK_THROWS_AS(load_matrix(temp_path("does_not_exist.csv")), Error);
}

TEST_CASE("embedding round trip") {
  Embedding e{Matrix(4, 2)};
  e.z << 1, 2, 3, 4, 5, 6, 7, 8.125;
  const fs::path p = temp_path("emb.csv");
  save_embedding(p, e, {{"cls", {0, 1, 1, 0}}});
  const DataMatrix back = load_embedding(p);
  CHECK(back.points == e.z);
  REQUIRE(back.labels.size() == 1);
  CHECK(back.labels[0].values == std::vector<int>{0, 1, 1, 0});
}

TEST_CASE("binary matrix cache keeps infinity") {
  Matrix m(2, 3);
  m << 0, kInfinity, 1.5, -2, 3e-310, 7;
  const fs::path p = temp_path("m.glmx");
  write_binary_matrix(p, m);
  const Matrix back = read_binary_matrix(p);
  REQUIRE(back.rows() == 2);
  REQUIRE(back.cols() == 3);
  CHECK(std::isnan(back(0, 1)));
  const GlobalDistanceMatrix d = GlobalDistanceMatrix::from_matrix(read_binary_matrix(p).topLeftCorner(2, 2));
  CHECK_FALSE(d.finite(0, 1));
  CHECK(back(1, 1) == 3e-310);
  {
    std::ofstream bad(temp_path("bad.glmx"), std::ios::binary);
    bad << "NOPE";
  }
  CHECK_THROWS_AS(read_binary_matrix(temp_path("bad.glmx")), Error);
}

}  // TEST_SUITE
