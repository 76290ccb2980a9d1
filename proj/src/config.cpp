#include "glomap/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace glomap {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw Error("invalid value '" + std::string(v) + "' for '" + std::string(key) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error("invalid boolean '" + std::string(v) + "' for '" + std::string(key) + "'");
}

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

template <typename T, typename F>
std::string join(const std::vector<T>& xs, F f) {
  std::string out;
  for (std::size_t t = 0; t < xs.size(); ++t) {
    if (t) out += ",";
    out += f(xs[t]);
  }
  return out;
}

}  // namespace

std::string to_string(Method m) { return m == Method::kGlomap ? "glomap" : "iglomap"; }

Method parse_method(std::string_view s) {
  if (s == "glomap") return Method::kGlomap;
  if (s == "iglomap") return Method::kIglomap;
  throw Error("unknown method '" + std::string(s) + "' (expected glomap or iglomap)");
}

RunConfig::RunConfig() {
  for (Index k = 1; k <= 50; ++k) knn_grid.push_back(k);
}

Index RunConfig::effective_epochs() const {
  if (epochs) return *epochs;
  return method == Method::kGlomap ? 300 : 150;
}

FitConfig RunConfig::fit_config() const {
  FitConfig f = fit;
  f.n_epoch = effective_epochs();
  f.seed = Seed{seed};
  return f;
}

InductiveConfig RunConfig::inductive_config() const {
  InductiveConfig c;
  c.fit = fit_config();
  return c;
}

std::vector<double> parse_real_list(std::string_view s) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  for (auto part : split(s, ',')) {
    if (part.empty()) throw Error("empty element in list '" + std::string(s) + "'");
    out.push_back(parse_number<double>("list", part));
  }
  return out;
}

std::vector<Index> parse_index_list(std::string_view s) {
  std::vector<Index> out;
  if (trim(s).empty()) return out;
  for (auto part : split(s, ',')) {
    if (part.empty()) throw Error("empty element in list '" + std::string(s) + "'");
    const auto colon = part.find(':');
    if (colon == std::string_view::npos) {
      out.push_back(parse_number<Index>("list", part));
      continue;
    }
    const auto lo = parse_number<Index>("list", trim(part.substr(0, colon)));
    const auto hi = parse_number<Index>("list", trim(part.substr(colon + 1)));
    if (hi < lo) throw Error("empty range '" + std::string(part) + "'");
    for (Index k = lo; k <= hi; ++k) out.push_back(k);
  }
  return out;
}

void apply_setting(RunConfig& cfg, std::string_view key_in, std::string_view value_in) {
  std::string key(trim(key_in));
  for (char& ch : key) {
    if (ch == '-') ch = '_';
  }
  const std::string_view v = trim(value_in);
  FitConfig& f = cfg.fit;
  auto real = [&] { return parse_number<double>(key, v); };
  auto count = [&] { return parse_number<Index>(key, v); };

  if (key == "dataset") {
    cfg.dataset = v;
  } else if (key == "input") {
    cfg.input = std::string(v);
  } else if (key == "n") {
    cfg.n = count();
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, v);
  } else if (key == "method") {
    cfg.method = parse_method(v);
  } else if (key == "epochs") {
    if (v == "default") {
      cfg.epochs.reset();
    } else {
      cfg.epochs = count();
    }
  } else if (key == "batch") {
    f.batch = count();
  } else if (key == "k") {
    f.k = count();
  } else if (key == "k_tilde") {
    if (v == "none") {
      f.ktilde.reset();
    } else {
      f.ktilde = count();
    }
  } else if (key == "lambda_e") {
    f.lambda_e = real();
  } else if (key == "tau_start") {
    f.tau_start = real();
  } else if (key == "tau_end") {
    f.tau_end = real();
  } else if (key == "fixed_tau") {
    if (v == "none") {
      f.fixed_tau.reset();
    } else {
      f.fixed_tau = real();
    }
  } else if (key == "alpha0") {
    f.alpha0 = real();
  } else if (key == "clip") {
    f.clip = real();
  } else if (key == "dim") {
    f.dim = count();
  } else if (key == "neg_approx") {
    f.neg_approx = parse_bool(key, v);
  } else if (key == "out") {
    cfg.out = std::string(v);
  } else if (key == "checkpoint_every") {
    cfg.checkpoint_every = count();
  } else if (key == "metrics") {
    cfg.metrics.clear();
    for (auto part : split(v, ',')) {
      if (part.empty()) continue;
      if (part != "knn" && part != "dtm" && part != "corr" && part != "trust" &&
          part != "silhouette") {
        throw Error("unknown metric '" + std::string(part) + "'");
      }
      cfg.metrics.emplace_back(part);
    }
  } else if (key == "sigma_grid") {
    cfg.sigma_grid = parse_real_list(v);
  } else if (key == "knn_grid") {
    cfg.knn_grid = parse_index_list(v);
  } else if (key == "trust_k") {
    cfg.trust_k = count();
  } else {
    throw Error("unknown configuration key '" + key + "'");
  }
}

RunConfig parse_run_config(std::string_view text, RunConfig base) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    try {
      apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return base;
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), std::move(base));
}

std::string format_run_config(const RunConfig& cfg) {
  const FitConfig& f = cfg.fit;
  std::ostringstream o;
  o << "dataset = " << cfg.dataset << "\n";
  o << "input = " << cfg.input.string() << "\n";
  o << "n = " << cfg.n << "\n";
  o << "seed = " << cfg.seed << "\n";
  o << "method = " << to_string(cfg.method) << "\n";
  o << "epochs = " << cfg.effective_epochs() << "\n";
  o << "batch = " << f.batch << "\n";
  o << "k = " << f.k << "\n";
  o << "k_tilde = " << (f.ktilde ? std::to_string(*f.ktilde) : "none") << "\n";
  o << "lambda_e = " << fmt(f.lambda_e) << "\n";
  o << "tau_start = " << fmt(f.tau_start) << "\n";
  o << "tau_end = " << fmt(f.tau_end) << "\n";
  o << "fixed_tau = " << (f.fixed_tau ? fmt(*f.fixed_tau) : "none") << "\n";
  o << "alpha0 = " << fmt(f.alpha0) << "\n";
  o << "clip = " << fmt(f.clip) << "\n";
  o << "dim = " << f.dim << "\n";
  o << "neg_approx = " << (f.neg_approx ? "true" : "false") << "\n";
  o << "out = " << cfg.out.string() << "\n";
  o << "checkpoint_every = " << cfg.checkpoint_every << "\n";
  o << "metrics = " << join(cfg.metrics, [](const std::string& s) { return s; }) << "\n";
  o << "sigma_grid = " << join(cfg.sigma_grid, fmt) << "\n";
  o << "knn_grid = " << join(cfg.knn_grid, [](Index k) { return std::to_string(k); }) << "\n";
  o << "trust_k = " << cfg.trust_k << "\n";
  return o.str();
}

}  // namespace glomap
