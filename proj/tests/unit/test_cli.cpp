#include "glomap/io.hpp"
#include "glomap/mapper.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace glomap;
namespace fs = std::filesystem;

namespace {

fs::path workdir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "glomap_unit_cli";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(GLOMAP_CLI_PATH) + " " + args + " > " +
                          (workdir() / "stdout.txt").string() + " 2> " +
                          (workdir() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("generate is deterministic; unknown dataset fails") {
  const fs::path a = workdir() / "gen_a", b = workdir() / "gen_b";
  REQUIRE(run("generate --dataset scurve --n 200 --seed 3 --out " + a.string()) == 0);
  REQUIRE(run("generate --dataset scurve --n 200 --seed 3 --out " + b.string()) == 0);
  CHECK(slurp(a / "data.csv") == slurp(b / "data.csv"));
  CHECK(load_matrix(a / "data.csv").rows() == 200);
  CHECK(run("generate --dataset nope --n 10 --out " + a.string()) != 0);
  CHECK(slurp(workdir() / "stderr.txt").find("error:") != std::string::npos);
}

TEST_CASE("fit, evaluate and plot a transductive run") {
  const fs::path data = workdir() / "gen_fit";
  REQUIRE(run("generate --dataset scurve --n 300 --seed 1 --out " + data.string()) == 0);
  const fs::path out = workdir() / "fit_glomap";
  REQUIRE(run("fit --input " + (data / "data.csv").string() + " --epochs 6 --checkpoint-every 3 --quiet --out " +
              out.string()) == 0);
  CHECK(fs::exists(out / "config.txt"));
  CHECK(fs::exists(out / "loss.csv"));
  CHECK(fs::exists(out / "checkpoints" / "epoch_0001.csv"));
  CHECK(fs::exists(out / "checkpoints" / "epoch_0006.csv"));
  const DataMatrix emb = load_embedding(out / "embedding.csv");
  CHECK(emb.rows() == 300);
  CHECK(emb.cols() == 2);

  const fs::path report = out / "metrics.csv";
  REQUIRE(run("evaluate --embedding " + (out / "embedding.csv").string() + " --reference " +
              (data / "data.csv").string() + " --metrics trust,corr --trust-k 5 --report " +
              report.string()) == 0);
  const std::string csv = slurp(report);
  CHECK(csv.rfind("metric,param,value\n", 0) == 0);
  CHECK(csv.find("trustworthiness,K=5,") != std::string::npos);
  CHECK(csv.find("distance_correlation") != std::string::npos);

  REQUIRE(run("plot --checkpoints " + (out / "checkpoints").string() + " --reference " +
              (data / "data.csv").string() + " --color coord0 --out " + (out / "cp.svg").string()) == 0);
  const std::string svg = slurp(out / "cp.svg");
  CHECK(svg.find("epoch 6") != std::string::npos);
  REQUIRE(run("plot --embedding " + (out / "embedding.csv").string() + " --out " +
              (out / "emb.svg").string()) == 0);
  CHECK(fs::file_size(out / "emb.svg") > 0);
}

TEST_CASE("inductive fit then transform") {
  const fs::path out = workdir() / "fit_iglomap";
  REQUIRE(run("fit --dataset scurve --n 250 --seed 2 --method iglomap --epochs 2 --quiet --out " +
              out.string()) == 0);
  REQUIRE(fs::exists(out / "mapper.glmq"));
  const fs::path data = workdir() / "gen_new";
  REQUIRE(run("generate --dataset scurve --n 40 --seed 9 --out " + data.string()) == 0);
  REQUIRE(run("transform --mapper " + (out / "mapper.glmq").string() + " --input " +
              (data / "data.csv").string() + " --out " + (out / "new.csv").string()) == 0);
  CHECK(load_embedding(out / "new.csv").rows() == 40);
  CHECK(run("transform --mapper " + (out / "missing.glmq").string() + " --input " +
            (data / "data.csv").string() + " --out " + (out / "x.csv").string()) != 0);
}

TEST_CASE("bad config file reports the line") {
  const fs::path cfg = workdir() / "bad.cfg";
  {
    std::ofstream o(cfg);
    o << "n = 10\nwhat = 1\n";
  }
  CHECK(run("fit --config " + cfg.string() + " --dataset scurve") != 0);
  CHECK(slurp(workdir() / "stderr.txt").find("line 2") != std::string::npos);
}

}  // TEST_SUITE
