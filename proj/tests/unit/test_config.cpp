#include "glomap/config.hpp"

#include <doctest.h>

using namespace glomap;

TEST_SUITE("config") {

TEST_CASE("defaults") {
  const RunConfig c;
  CHECK(c.method == Method::kGlomap);
  CHECK(c.effective_epochs() == 300);
  CHECK(c.knn_grid.size() == 50);
  CHECK(c.knn_grid.front() == 1);
  CHECK(c.knn_grid.back() == 50);
  RunConfig i;
  i.method = Method::kIglomap;
  CHECK(i.effective_epochs() == 150);
  CHECK(i.inductive_config().fit.n_epoch == 150);
}

TEST_CASE("parse key = value lines") {
  const RunConfig c = parse_run_config(
      "# a comment\n"
      "dataset = scurve\n"
      "n = 500   # trailing comment\n"
      "\n"
      "method = iglomap\n"
      "k-tilde = 40\n"
      "lambda_e = 0.5\n"
      "fixed-tau = 0.2\n"
      "neg_approx = true\n"
      "seed = 18446744073709551615\n"
      "knn_grid = 1, 3:5, 10\n"
      "sigma_grid = 0.1,1\n");
  CHECK(c.dataset == "scurve");
  CHECK(c.n == 500);
  CHECK(c.method == Method::kIglomap);
  REQUIRE(c.fit.ktilde.has_value());
  CHECK(*c.fit.ktilde == 40);
  CHECK(c.fit.lambda_e == 0.5);
  CHECK(c.fit.fixed_tau == 0.2);
  CHECK(c.fit.neg_approx);
  CHECK(c.seed == 18446744073709551615ull);
  CHECK(c.knn_grid == std::vector<Index>{1, 3, 4, 5, 10});
  CHECK(c.sigma_grid == std::vector<double>{0.1, 1.0});
  CHECK(c.fit_config().seed.value == c.seed);
}

TEST_CASE("unknown key and bad value report the line") {
  try {
    parse_run_config("n = 10\nbogus = 3\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  try {
    parse_run_config("\n\nn = ten\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_run_config("no equals sign\n"), ParseError);
  CHECK_THROWS_AS(parse_method("umap"), Error);
  RunConfig c;
  CHECK_THROWS_AS(apply_setting(c, "metrics", "knn,bogus"), Error);
}

TEST_CASE("format and parse round trip") {
  RunConfig c;
  c.dataset = "hierarchical";
  c.n = 1234;
  c.seed = 99;
  c.method = Method::kIglomap;
  c.epochs = 7;
  c.fit.k = 250;
  c.fit.ktilde = 300;
  c.fit.tau_start = 0.9;
  c.fit.tau_end = 1.0 / 3.0;
  c.metrics = {"knn", "trust"};
  c.trust_k = 12;
  c.checkpoint_every = 5;
  const std::string text = format_run_config(c);
  const RunConfig back = parse_run_config(text);
  CHECK(format_run_config(back) == text);
  CHECK(back.fit.tau_end == c.fit.tau_end);
  CHECK(back.epochs == 7);
  CHECK(back.metrics == c.metrics);
}

TEST_CASE("list parsing") {
  CHECK(parse_index_list("2:4") == std::vector<Index>{2, 3, 4});
  CHECK_THROWS_AS(parse_index_list("4:2"), Error);
  CHECK_THROWS_AS(parse_index_list("1,,2"), Error);
  CHECK(parse_real_list("1e-3, 10") == std::vector<double>{1e-3, 10.0});
  CHECK_THROWS_AS(parse_real_list("abc"), Error);
}

}  // TEST_SUITE
