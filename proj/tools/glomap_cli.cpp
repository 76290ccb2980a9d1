// Command-line front end: generate, fit, transform, evaluate, plot.

#include "glomap/config.hpp"
#include "glomap/data.hpp"
#include "glomap/inductive.hpp"
#include "glomap/io.hpp"
#include "glomap/metrics.hpp"
#include "glomap/plot.hpp"
#include "glomap/transductive.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>

namespace fs = std::filesystem;
using namespace glomap;

namespace {

// Flags that map one-to-one onto RunConfig keys.
const std::vector<std::string> kValueFlags = {
    "dataset", "n",        "seed",      "method",  "epochs", "batch", "k",
    "k-tilde", "lambda-e", "tau-start", "tau-end", "fixed-tau", "alpha0", "clip",
    "dim",     "out",      "checkpoint-every", "metrics", "sigma-grid", "knn-grid", "trust-k"};

const std::map<std::string, std::string> kFlagHelp = {
    {"dataset", "generator: scurve, severed_sphere, eggs, hierarchical, spheres"},
    {"n", "number of generated points"},
    {"seed", "random seed"},
    {"method", "glomap (transductive) or iglomap (inductive mapper)"},
    {"epochs", "training epochs (default 300 for glomap, 150 for iglomap)"},
    {"batch", "mini-batch size"},
    {"k", "neighbors for the local distance graph"},
    {"k-tilde", "keep only the K~ nearest global distances per row, or none"},
    {"lambda-e", "weight of the repulsive term"},
    {"tau-start", "initial temperature"},
    {"tau-end", "final temperature"},
    {"fixed-tau", "constant temperature (disables tempering), or none"},
    {"alpha0", "initial particle learning rate"},
    {"clip", "per-coordinate gradient clip"},
    {"dim", "embedding dimension"},
    {"out", "output directory"},
    {"checkpoint-every", "epochs between particle checkpoints (0 disables)"},
    {"metrics", "comma list of knn, dtm, corr, trust, silhouette"},
    {"sigma-grid", "comma list of dtm bandwidths"},
    {"knn-grid", "comma list or ranges (1:50) of KNN classifier sizes"},
    {"trust-k", "neighborhood size for trustworthiness"},
};

struct SharedFlags {
  std::map<std::string, std::string> values;
  bool neg_approx = false;
  std::string config_path;
};

void add_run_flags(CLI::App* app, SharedFlags& f, const std::vector<std::string>& names) {
  app->add_option("--config", f.config_path, "key = value config file; flags override it");
  for (const auto& name : names) {
    if (name == "neg-approx") {
      app->add_flag("--neg-approx", f.neg_approx, "use 1 in place of (1 - mu) in the repulsive term");
    } else {
      app->add_option("--" + name, f.values[name], kFlagHelp.at(name));
    }
  }
}

RunConfig resolve(CLI::App* app, const SharedFlags& f) {
  RunConfig cfg;
  if (!f.config_path.empty()) cfg = load_run_config(f.config_path);
  for (const auto& [name, value] : f.values) {
    if (app->count("--" + name) > 0) apply_setting(cfg, name, value);
  }
  if (f.neg_approx) cfg.fit.neg_approx = true;
  return cfg;
}

template <typename F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw Error(name + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
}

std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

DataMatrix load_input(const RunConfig& cfg) {
  if (!cfg.input.empty()) return stage("load", [&] { return load_matrix(cfg.input); });
  if (cfg.dataset.empty()) throw Error("no input: pass --input FILE or --dataset NAME");
  return stage("generate", [&] { return generate(cfg.dataset, cfg.n, Seed{cfg.seed}); });
}

int cmd_generate(CLI::App* app, const SharedFlags& f) {
  RunConfig cfg = resolve(app, f);
  if (cfg.dataset.empty()) throw Error("generate: --dataset is required");
  const DataMatrix data = stage("generate", [&] { return generate(cfg.dataset, cfg.n, Seed{cfg.seed}); });
  fs::create_directories(cfg.out);
  save_matrix(cfg.out / "data.csv", data);
  write_text(cfg.out / "config.txt", format_run_config(cfg));
  std::cout << "wrote " << data.rows() << " x " << data.cols() << " to "
            << (cfg.out / "data.csv").string() << "\n";
  return 0;
}

int cmd_fit(CLI::App* app, const SharedFlags& f, const std::string& input, bool quiet) {
  RunConfig cfg = resolve(app, f);
  if (!input.empty()) cfg.input = input;
  const DataMatrix data = load_input(cfg);
  fs::create_directories(cfg.out);
  const fs::path ckpt_dir = cfg.out / "checkpoints";
  if (cfg.checkpoint_every > 0) fs::create_directories(ckpt_dir);
  write_text(cfg.out / "config.txt", format_run_config(cfg));

  std::string loss_log = "epoch,tau,alpha,mean_loss\n";
  const Index epochs = cfg.effective_epochs();
  auto log_epoch = [&](const EpochReport& r) {
    loss_log += std::to_string(r.epoch + 1) + "," + fmt(r.tau) + "," + fmt(r.alpha) + "," +
                fmt(r.mean_loss) + "\n";
    if (!quiet) {
      std::printf("epoch %4lld/%lld  tau=%.4f  alpha=%.4f  loss=%.6g\n",
                  static_cast<long long>(r.epoch + 1), static_cast<long long>(epochs), r.tau,
                  r.alpha, r.mean_loss);
      std::fflush(stdout);
    }
  };
  auto want_checkpoint = [&](Index epoch) {
    return cfg.checkpoint_every > 0 && (epoch == 0 || (epoch + 1) % cfg.checkpoint_every == 0);
  };
  auto checkpoint_path = [&](Index epoch) {
    char name[32];
    std::snprintf(name, sizeof(name), "epoch_%04lld.csv", static_cast<long long>(epoch + 1));
    return ckpt_dir / name;
  };

  const GlobalDistanceMatrix d =
      stage("distances", [&] { return prepare_distances(data.points, cfg.fit_config()); });

  Embedding result;
  if (cfg.method == Method::kGlomap) {
    const FitResult r = stage("optimize", [&] {
      return fit_transductive(d, cfg.fit_config(), [&](const EpochReport& rep, const Embedding& e) {
        log_epoch(rep);
        if (want_checkpoint(rep.epoch)) save_embedding(checkpoint_path(rep.epoch), e, data.labels);
      });
    });
    result = r.embedding;
  } else {
    const InductiveResult r = stage("optimize", [&] {
      return fit_inductive(data.points, d, cfg.inductive_config(),
                           [&](const InductiveEpochReport& rep, const Mapper& m) {
                             log_epoch(rep.particles);
                             if (want_checkpoint(rep.particles.epoch)) {
                               save_embedding(checkpoint_path(rep.particles.epoch),
                                              transform(m, data.points), data.labels);
                             }
                           });
    });
    r.mapper.save(cfg.out / "mapper.glmq");
    result = transform(r.mapper, data.points);
  }
  save_embedding(cfg.out / "embedding.csv", result, data.labels);
  write_text(cfg.out / "loss.csv", loss_log);
  std::cout << "wrote " << (cfg.out / "embedding.csv").string() << "\n";
  return 0;
}

int cmd_transform(const std::string& mapper_path, const std::string& input, const std::string& out) {
  const Mapper m = stage("load mapper", [&] { return Mapper::load(mapper_path); });
  const DataMatrix data = stage("load", [&] { return load_matrix(input); });
  const Embedding e = stage("transform", [&] { return transform(m, data.points); });
  save_embedding(out, e, data.labels);
  std::cout << "wrote " << e.size() << " x " << e.dim() << " to " << out << "\n";
  return 0;
}

int cmd_evaluate(CLI::App* app, const SharedFlags& f, const std::string& embedding_path,
                 const std::string& reference_path, const std::string& out) {
  RunConfig cfg = resolve(app, f);
  const DataMatrix emb = stage("load embedding", [&] { return load_embedding(embedding_path); });
  std::optional<DataMatrix> ref;
  if (!reference_path.empty()) ref = stage("load reference", [&] { return load_matrix(reference_path); });
  if (ref && ref->rows() != emb.rows()) throw Error("embedding and reference differ in row count");

  const std::vector<LabelVector>& labels = !emb.labels.empty() || !ref ? emb.labels : ref->labels;
  const std::optional<Matrix> coords = ref ? ref->coords2d : std::nullopt;

  std::vector<std::string> metrics = cfg.metrics;
  const bool explicit_request = !metrics.empty();
  if (!explicit_request) {
    if (!labels.empty()) metrics.insert(metrics.end(), {"knn", "silhouette"});
    if (coords) metrics.insert(metrics.end(), {"dtm", "corr"});
    if (ref) metrics.push_back("trust");
  }
  auto require = [&](bool ok, const std::string& metric, const std::string& what) {
    if (!ok) throw Error("metric '" + metric + "' needs " + what);
  };

  MetricReport report;
  for (const auto& metric : metrics) {
    stage(metric, [&] {
      if (metric == "knn") {
        require(!labels.empty(), metric, "label columns");
        for (const auto& lv : labels) {
          std::vector<Index> ks;
          for (Index k : cfg.knn_grid) {
            if (k < emb.rows()) ks.push_back(k);
          }
          const auto acc = knn_accuracy_sweep(emb.points, lv.values, ks);
          for (std::size_t t = 0; t < ks.size(); ++t) {
            report.add("knn_accuracy:" + lv.name, "K=" + std::to_string(ks[t]), acc[t]);
          }
        }
      } else if (metric == "silhouette") {
        require(!labels.empty(), metric, "label columns");
        for (const auto& lv : labels) report.add("silhouette:" + lv.name, "", silhouette(emb.points, lv.values));
      } else if (metric == "dtm") {
        require(coords.has_value(), metric, "a reference file with coord columns");
        for (double s : cfg.sigma_grid) report.add("dtm_kl", "sigma=" + fmt(s), dtm_kl(*coords, emb.points, s));
      } else if (metric == "corr") {
        require(coords.has_value(), metric, "a reference file with coord columns");
        CorrelationOptions opts;
        opts.seed = Seed{cfg.seed};
        const auto r = distance_correlation_report(*coords, emb.points, opts);
        report.add("distance_correlation", "pairs=" + std::to_string(r.pairs_used), r.value);
      } else if (metric == "trust") {
        require(ref.has_value(), metric, "a reference data file");
        report.add("trustworthiness", "K=" + std::to_string(cfg.trust_k),
                   trustworthiness(ref->points, emb.points, cfg.trust_k));
      }
      return 0;
    });
  }
  if (out.empty()) {
    std::cout << report.to_csv();
  } else {
    report.write(out);
    std::cout << "wrote " << report.entries.size() << " metrics to " << out << "\n";
  }
  return 0;
}

std::optional<ColorColumn> pick_color(const DataMatrix& emb, const std::optional<DataMatrix>& ref,
                                      const std::string& color) {
  if (color == "none") return std::nullopt;
  auto from_labels = [&](const DataMatrix& m, const std::string& name) -> std::optional<ColorColumn> {
    for (const auto& lv : m.labels) {
      if (name.empty() || lv.name == name) {
        return ColorColumn{ColorColumn::Kind::kCategorical,
                           std::vector<double>(lv.values.begin(), lv.values.end())};
      }
    }
    return std::nullopt;
  };
  if (color.empty()) {
    if (auto c = from_labels(emb, "")) return c;
    if (ref) return from_labels(*ref, "");
    return std::nullopt;
  }
  if (color == "coord0" || color == "coord1") {
    if (!ref || !ref->coords2d) throw Error("--color " + color + " needs --reference with coord columns");
    const Index c = color == "coord0" ? 0 : 1;
    ColorColumn col{ColorColumn::Kind::kContinuous, {}};
    for (Index i = 0; i < ref->rows(); ++i) col.values.push_back((*ref->coords2d)(i, c));
    return col;
  }
  if (auto c = from_labels(emb, color)) return c;
  if (ref) {
    if (auto c = from_labels(*ref, color)) return c;
  }
  throw Error("no label column named '" + color + "'");
}

int cmd_plot(const std::string& embedding_path, const std::string& checkpoints,
             const std::string& reference_path, const std::string& color, const std::string& title,
             const std::string& out) {
  std::optional<DataMatrix> ref;
  if (!reference_path.empty()) ref = stage("load reference", [&] { return load_matrix(reference_path); });
  std::vector<PlotPanel> panels;
  auto add_panel = [&](const fs::path& path, const std::string& panel_title) {
    const DataMatrix emb = stage("load embedding", [&] { return load_embedding(path); });
    if (ref && ref->rows() != emb.rows()) throw Error("embedding and reference differ in row count");
    panels.push_back({emb.points, pick_color(emb, ref, color), panel_title});
  };
  if (!checkpoints.empty()) {
    std::vector<fs::path> files;
    const std::regex pattern(R"(epoch_(\d+)\.csv)");
    for (const auto& entry : fs::directory_iterator(checkpoints)) {
      if (std::regex_match(entry.path().filename().string(), pattern)) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error("no epoch_*.csv checkpoints in '" + checkpoints + "'");
    for (const auto& p : files) {
      std::smatch m;
      const std::string name = p.filename().string();
      std::regex_match(name, m, pattern);
      add_panel(p, "epoch " + std::to_string(std::stoll(m[1].str())));
    }
  } else {
    if (embedding_path.empty()) throw Error("plot: pass --embedding FILE or --checkpoints DIR");
    add_panel(embedding_path, "");
  }
  PlotOptions opts;
  opts.title = title;
  stage("plot", [&] {
    write_svg(out, panels, opts);
    return 0;
  });
  std::cout << "wrote " << panels.size() << " panel(s) to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"glomap: global and local manifold embedding"};
  app.require_subcommand(1);

  SharedFlags gen_flags, fit_flags, eval_flags;
  std::vector<std::string> fit_names = kValueFlags;
  fit_names.push_back("neg-approx");

  auto* gen = app.add_subcommand("generate", "write a synthetic dataset as CSV");
  add_run_flags(gen, gen_flags, {"dataset", "n", "seed", "out"});

  auto* fit = app.add_subcommand("fit", "embed a dataset (glomap or iglomap)");
  std::string fit_input;
  bool quiet = false;
  fit->add_option("--input", fit_input, "data CSV (otherwise --dataset is generated)");
  fit->add_flag("--quiet", quiet, "suppress per-epoch log lines");
  add_run_flags(fit, fit_flags, fit_names);

  auto* tr = app.add_subcommand("transform", "map new rows with a trained mapper");
  std::string mapper_path, tr_input, tr_out;
  tr->add_option("--mapper", mapper_path)->required();
  tr->add_option("--input", tr_input)->required();
  tr->add_option("--out", tr_out)->required();

  auto* ev = app.add_subcommand("evaluate", "compute quality metrics for an embedding");
  std::string ev_embedding, ev_reference, ev_out;
  ev->add_option("--embedding", ev_embedding)->required();
  ev->add_option("--reference", ev_reference, "data CSV with points, labels and coord columns");
  ev->add_option("--report", ev_out, "metric CSV path (stdout when omitted)");
  add_run_flags(ev, eval_flags, {"metrics", "sigma-grid", "knn-grid", "trust-k", "seed"});

  auto* pl = app.add_subcommand("plot", "render an embedding or checkpoint series as SVG");
  std::string pl_embedding, pl_checkpoints, pl_reference, pl_color, pl_title, pl_out;
  pl->add_option("--embedding", pl_embedding);
  pl->add_option("--checkpoints", pl_checkpoints, "directory of epoch_*.csv files");
  pl->add_option("--reference", pl_reference, "data CSV supplying extra color columns");
  pl->add_option("--color", pl_color, "label name, coord0, coord1 or none");
  pl->add_option("--title", pl_title);
  pl->add_option("--out", pl_out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_generate(gen, gen_flags);
    if (*fit) return cmd_fit(fit, fit_flags, fit_input, quiet);
    if (*tr) return cmd_transform(mapper_path, tr_input, tr_out);
    if (*ev) return cmd_evaluate(ev, eval_flags, ev_embedding, ev_reference, ev_out);
    if (*pl) return cmd_plot(pl_embedding, pl_checkpoints, pl_reference, pl_color, pl_title, pl_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
