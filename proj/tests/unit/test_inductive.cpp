#include "glomap/data.hpp"
#include "glomap/inductive.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace glomap;

namespace {

InductiveConfig small_config(Index epochs) {
  InductiveConfig cfg;
  cfg.fit.n_epoch = epochs;
  cfg.fit.seed = Seed{17};
  cfg.hidden = 16;
  return cfg;
}

}  // namespace

TEST_SUITE("inductive") {

TEST_CASE("fit is deterministic and reports every epoch") {
  const DataMatrix s = gen_scurve(300, Seed{2});
  const InductiveConfig cfg = small_config(4);
  std::vector<MapperMode> modes;
  const InductiveResult a = fit_inductive(
      s.points, cfg, [&](const InductiveEpochReport&, const Mapper& m) { modes.push_back(m.mode()); });
  const InductiveResult b = fit_inductive(s.points, cfg);
  REQUIRE(a.history.size() == 4);
  CHECK(std::all_of(modes.begin(), modes.end(), [](MapperMode m) { return m == MapperMode::kEval; }));
  CHECK(std::equal(a.mapper.parameters().begin(), a.mapper.parameters().end(),
                   b.mapper.parameters().begin()));
  CHECK(a.mapper.mode() == MapperMode::kEval);
  CHECK(a.history[3].learning_rate == doctest::Approx(0.01 * 0.98 * 0.98 * 0.98));
  CHECK(a.last_particles.rows() == 200);
  CHECK(a.last_ids.size() == 200);
  const Embedding e = transform(a.mapper, s.points);
  CHECK(e.z.rows() == 300);
  CHECK(e.z.cols() == 2);
  CHECK(e.z.allFinite());
}

TEST_CASE("mapper output tracks the moved particles") {
  const DataMatrix s = gen_scurve(400, Seed{3});
  const InductiveResult r = fit_inductive(s.points, small_config(12));
  const double first = r.history.front().mean_regression;
  const double last = r.history.back().mean_regression;
  CHECK(std::isfinite(last));
  CHECK(last < first);
}

TEST_CASE("transform: empty input and dimension mismatch") {
  Rng rng(4);
  const Mapper m({3, 8, 2, 2}, rng);
  const Embedding empty = transform(m, Matrix(0, 3));
  CHECK(empty.z.rows() == 0);
  CHECK_THROWS_AS(transform(m, oracle::random_matrix(5, 4, rng)), Error);
}

TEST_CASE("configuration errors") {
  const DataMatrix s = gen_scurve(150, Seed{5});
  InductiveConfig cfg = small_config(2);
  cfg.bn_momentum = 1.5;
  CHECK_THROWS_AS(fit_inductive(s.points, cfg), Error);
  cfg = small_config(2);
  cfg.fit.batch = 200;
  CHECK_THROWS_AS(fit_inductive(s.points, cfg), Error);
}

}  // TEST_SUITE
