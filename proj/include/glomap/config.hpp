#pragma once

#include "glomap/inductive.hpp"
#include "glomap/transductive.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace glomap {

enum class Method { kGlomap, kIglomap };

std::string to_string(Method m);
Method parse_method(std::string_view s);

/// Everything a CLI run needs. Serialized as flat `key = value` lines.
struct RunConfig {
  std::string dataset;                ///< generator name; empty when `input` is used
  std::filesystem::path input;        ///< data CSV; takes precedence over `dataset`
  Index n = 2000;
  std::uint64_t seed = 0;
  Method method = Method::kGlomap;
  std::optional<Index> epochs;        ///< defaults to 300 (glomap) or 150 (iglomap)
  FitConfig fit;
  std::vector<std::string> metrics;   ///< knn, dtm, corr, trust, silhouette
  std::vector<double> sigma_grid{0.001, 0.01, 0.1, 1.0, 10.0};
  std::vector<Index> knn_grid;        ///< defaults to 1..50
  Index trust_k = 5;
  std::filesystem::path out = ".";
  Index checkpoint_every = 25;

  RunConfig();
  Index effective_epochs() const;
  /// FitConfig with seed and epoch count filled in.
  FitConfig fit_config() const;
  InductiveConfig inductive_config() const;
};

/// Applies one setting. Keys use '_' or '-' interchangeably.
/// Throws Error on an unknown key or a malformed value.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Parses `key = value` lines; '#' starts a comment. Errors carry the line number.
RunConfig parse_run_config(std::string_view text, RunConfig base = {});
RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {});

/// Canonical text form; parse_run_config(format_run_config(c)) reproduces c.
std::string format_run_config(const RunConfig& cfg);

std::vector<double> parse_real_list(std::string_view s);
/// Comma-separated integers and inclusive ranges such as "1:50".
std::vector<Index> parse_index_list(std::string_view s);

}  // namespace glomap
