#pragma once

// Flat key=value experiment configuration with [sections].
//
//   # comment
//   [experiment]
//   name = er_setting2
//   kind = topk            # topk | localization | jaccard | figure1
//   model = er             # er | pa | sw
//   seed_root = 20240601
//   centrality = degree    # degree | eigenvector | both
//
//   [graph]
//   n = 1000               # comma-separated list allowed
//   p = 0.25
//   m = 5
//   b = 1
//   k_ring = 24
//   rewire_p = 0.1
//
//   [noise]
//   alpha = 0.01, 0.02     # coefficient(s); list allowed
//   alpha_n_exponent = 0   # alpha_n = alpha * n^e * (log n)^f
//   alpha_log_exponent = 0
//   beta = 0.05
//   beta_n_exponent = 0
//   beta_log_exponent = 0
//
//   [run]
//   k = 5
//   graphs = 100
//   draws = 100
//   reps = 200             # localization
//   mean_degree = 25       # figure1
//   theory_curve = true
//
// Numbers may be written as fractions ("-1/3").

#include <cctype>
#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "noisytopk/experiments.hpp"
#include "noisytopk/io.hpp"

namespace noisytopk {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ConfigValue {
  std::string text;
  std::size_t line = 0;
};

/// Parsed "section.key" -> value map.
class ConfigFile {
 public:
  static ConfigFile parse(std::istream& is) {
    ConfigFile cfg;
    std::string line, section;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
        section = trim(line.substr(1, line.size() - 2));
        if (section.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
      if (section.empty())
        throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "' outside any [section]");
      const std::string full = section + "." + key;
      if (cfg.values_.count(full))
        throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + full + "'");
      cfg.values_[full] = {value, line_no};
    }
    return cfg;
  }

  static ConfigFile parse_string(const std::string& s) {
    std::istringstream is(s);
    return parse(is);
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const ConfigValue& at(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required key '" + key + "'");
    return it->second;
  }

  /// Throws on the first key not in `allowed`.
  void check_known(const std::set<std::string>& allowed) const {
    for (const auto& [k, v] : values_)
      if (!allowed.count(k)) throw ConfigError("line " + std::to_string(v.line) + ": unknown key '" + k + "'");
  }

  std::string get_string(const std::string& key, const std::string& def) const {
    return has(key) ? at(key).text : def;
  }

  double get_double(const std::string& key, double def) const { return has(key) ? to_double(at(key), key) : def; }

  std::uint64_t get_uint(const std::string& key, std::uint64_t def) const {
    return has(key) ? to_uint(at(key), key) : def;
  }

  bool get_bool(const std::string& key, bool def) const {
    if (!has(key)) return def;
    const auto& v = at(key);
    if (v.text == "true" || v.text == "1" || v.text == "yes") return true;
    if (v.text == "false" || v.text == "0" || v.text == "no") return false;
    throw ConfigError("line " + std::to_string(v.line) + ": '" + key + "' expects true/false");
  }

  std::vector<double> get_double_list(const std::string& key, const std::vector<double>& def) const {
    if (!has(key)) return def;
    std::vector<double> out;
    const auto& v = at(key);
    for (const auto& item : split(v.text)) out.push_back(to_double({item, v.line}, key));
    if (out.empty()) throw ConfigError("line " + std::to_string(v.line) + ": '" + key + "' is empty");
    return out;
  }

  std::vector<std::size_t> get_uint_list(const std::string& key, const std::vector<std::size_t>& def) const {
    if (!has(key)) return def;
    std::vector<std::size_t> out;
    const auto& v = at(key);
    for (const auto& item : split(v.text)) out.push_back(static_cast<std::size_t>(to_uint({item, v.line}, key)));
    if (out.empty()) throw ConfigError("line " + std::to_string(v.line) + ": '" + key + "' is empty");
    return out;
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  static std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }

  static double parse_number(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
    if (s[used] == '/') {
      const std::string rest = s.substr(used + 1);
      std::size_t used2 = 0;
      const double d = std::stod(rest, &used2);
      if (used2 == rest.size() && d != 0.0) return v / d;
    }
    throw std::invalid_argument("trailing characters");
  }

  static double to_double(const ConfigValue& v, const std::string& key) {
    try {
      return parse_number(v.text);
    } catch (const std::exception&) {
      throw ConfigError("line " + std::to_string(v.line) + ": '" + key + "' expects a number, got '" + v.text + "'");
    }
  }

  static std::uint64_t to_uint(const ConfigValue& v, const std::string& key) {
    try {
      std::size_t used = 0;
      if (!v.text.empty() && v.text.front() == '-') throw std::invalid_argument("negative");
      const auto x = std::stoull(v.text, &used);
      if (used != v.text.size()) throw std::invalid_argument("trailing");
      return x;
    } catch (const std::exception&) {
      throw ConfigError("line " + std::to_string(v.line) + ": '" + key + "' expects a non-negative integer, got '" +
                        v.text + "'");
    }
  }

  std::map<std::string, ConfigValue> values_;
};

enum class ExperimentKind { topk, localization, jaccard, figure1 };

inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::topk: return "topk";
    case ExperimentKind::localization: return "localization";
    case ExperimentKind::jaccard: return "jaccard";
    case ExperimentKind::figure1: return "figure1";
  }
  return "?";
}

/// Everything needed to run one configured experiment.
struct ExperimentSpec {
  std::string name = "experiment";
  ExperimentKind kind = ExperimentKind::topk;
  ExperimentConfig topk;            // topk / jaccard (model params, k, counts, seed)
  std::vector<std::size_t> n_grid;  // all kinds
  std::vector<NoiseParams> noise_grid;  // jaccard
  std::size_t reps = 200;           // localization
  std::size_t mean_degree = 25;     // figure1
  NoiseParams figure1_noise{0.01, 0.02};
  Json echo;                        // resolved configuration, for output metadata
};

inline ExperimentSpec experiment_from_config(const ConfigFile& c) {
  c.check_known({"experiment.name", "experiment.kind", "experiment.model", "experiment.seed_root",
                 "experiment.centrality", "graph.n", "graph.p", "graph.m", "graph.b", "graph.k_ring",
                 "graph.rewire_p", "noise.alpha", "noise.alpha_n_exponent", "noise.alpha_log_exponent", "noise.beta",
                 "noise.beta_n_exponent", "noise.beta_log_exponent", "run.k", "run.graphs", "run.draws", "run.reps",
                 "run.mean_degree", "run.theory_curve"});
  auto field_error = [&](const std::string& key, const std::string& msg) -> ConfigError {
    const std::string where = c.has(key) ? "line " + std::to_string(c.at(key).line) + ": " : "";
    return ConfigError(where + "'" + key + "' " + msg);
  };

  ExperimentSpec s;
  s.name = c.get_string("experiment.name", "experiment");
  for (char ch : s.name)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-'))
      throw field_error("experiment.name", "may only contain letters, digits, '_' and '-'");

  const std::string kind = c.get_string("experiment.kind", "topk");
  if (kind == "topk") s.kind = ExperimentKind::topk;
  else if (kind == "localization") s.kind = ExperimentKind::localization;
  else if (kind == "jaccard") s.kind = ExperimentKind::jaccard;
  else if (kind == "figure1") s.kind = ExperimentKind::figure1;
  else throw field_error("experiment.kind", "must be one of topk, localization, jaccard, figure1");

  auto& cfg = s.topk;
  const std::string model = c.get_string("experiment.model", s.kind == ExperimentKind::topk ? "er" : "pa");
  if (model == "er") cfg.model = Model::er;
  else if (model == "pa") cfg.model = Model::pa;
  else if (model == "sw") cfg.model = Model::sw;
  else throw field_error("experiment.model", "must be one of er, pa, sw");

  const std::string cent = c.get_string("experiment.centrality", s.kind == ExperimentKind::jaccard ? "both" : "degree");
  if (cent == "degree") cfg.centrality = CentralityChoice::degree;
  else if (cent == "eigenvector") cfg.centrality = CentralityChoice::eigenvector;
  else if (cent == "both") cfg.centrality = CentralityChoice::both;
  else throw field_error("experiment.centrality", "must be one of degree, eigenvector, both");

  cfg.seed_root = c.get_uint("experiment.seed_root", 0);
  cfg.model_params.p = c.get_double("graph.p", 0.25);
  cfg.model_params.m = static_cast<std::size_t>(c.get_uint("graph.m", s.kind == ExperimentKind::localization ? 1 : 5));
  cfg.model_params.b = c.get_double("graph.b", 1.0);
  cfg.model_params.k_ring = static_cast<std::size_t>(c.get_uint("graph.k_ring", 24));
  cfg.model_params.rewire_p = c.get_double("graph.rewire_p", 0.1);
  cfg.k = static_cast<std::size_t>(c.get_uint("run.k", 5));
  cfg.graphs_per_point = static_cast<std::size_t>(c.get_uint("run.graphs", 100));
  cfg.noise_draws_per_graph = static_cast<std::size_t>(c.get_uint("run.draws", 100));
  cfg.theory_curve = c.get_bool("run.theory_curve", true);
  s.reps = static_cast<std::size_t>(c.get_uint("run.reps", 200));
  s.mean_degree = static_cast<std::size_t>(c.get_uint("run.mean_degree", 25));

  if (cfg.graphs_per_point < 1) throw field_error("run.graphs", "must be >= 1");
  if (cfg.noise_draws_per_graph < 1) throw field_error("run.draws", "must be >= 1");
  if (s.reps < 1) throw field_error("run.reps", "must be >= 1");

  s.n_grid = c.get_uint_list("graph.n", {1000});
  for (std::size_t i = 1; i < s.n_grid.size(); ++i)
    if (s.n_grid[i] <= s.n_grid[i - 1]) throw field_error("graph.n", "grid must be strictly increasing");

  const auto alphas = c.get_double_list("noise.alpha", {0.05});
  const auto betas = c.get_double_list("noise.beta", {0.05});
  RateSchedule a_sched{0.0, c.get_double("noise.alpha_n_exponent", 0.0), c.get_double("noise.alpha_log_exponent", 0.0)};
  RateSchedule b_sched{0.0, c.get_double("noise.beta_n_exponent", 0.0), c.get_double("noise.beta_log_exponent", 0.0)};

  const std::size_t levels = std::max(alphas.size(), betas.size());
  if (alphas.size() > 1 && betas.size() > 1 && alphas.size() != betas.size())
    throw field_error("noise.beta", "list length must match noise.alpha");
  auto alpha_at = [&](std::size_t i) { return alphas.size() == 1 ? alphas[0] : alphas[i]; };
  auto beta_at = [&](std::size_t i) { return betas.size() == 1 ? betas[0] : betas[i]; };

  switch (s.kind) {
    case ExperimentKind::topk: {
      if (s.n_grid.size() > 1 && levels > 1)
        throw field_error("noise.alpha", "cannot vary noise and n in the same experiment");
      if (s.n_grid.size() > 1 || levels == 1) {
        a_sched.coef = alphas[0];
        b_sched.coef = betas[0];
        cfg.points = grid_over_n(s.n_grid, a_sched, b_sched);
      } else {
        const std::size_t n = s.n_grid[0];
        const bool vary_alpha = alphas.size() > 1;
        for (std::size_t i = 0; i < levels; ++i) {
          a_sched.coef = alpha_at(i);
          b_sched.coef = beta_at(i);
          GridPoint pt{0.0, n, {a_sched.at(n), b_sched.at(n)}};
          pt.x_value = vary_alpha ? pt.noise.alpha : pt.noise.beta;
          cfg.points.push_back(pt);
        }
      }
      for (const auto& pt : cfg.points) {
        if (!(pt.noise.alpha >= 0 && pt.noise.alpha <= 1)) throw field_error("noise.alpha", "evaluates outside [0, 1]");
        if (!(pt.noise.beta >= 0 && pt.noise.beta <= 1)) throw field_error("noise.beta", "evaluates outside [0, 1]");
        if (cfg.k < 1 || cfg.k >= pt.n) throw field_error("run.k", "must satisfy 1 <= k < n");
      }
      for (std::size_t i = 1; i < cfg.points.size(); ++i)
        if (!(cfg.points[i].x_value > cfg.points[i - 1].x_value))
          throw field_error("noise.alpha", "grid must be strictly increasing");
      break;
    }
    case ExperimentKind::jaccard: {
      if (s.n_grid.size() != 1) throw field_error("graph.n", "jaccard experiments take a single n");
      if (cfg.model != Model::pa) throw field_error("experiment.model", "jaccard experiments use model = pa");
      for (std::size_t i = 0; i < levels; ++i) {
        a_sched.coef = alpha_at(i);
        b_sched.coef = beta_at(i);
        NoiseParams np{a_sched.at(s.n_grid[0]), b_sched.at(s.n_grid[0])};
        np.validate();
        s.noise_grid.push_back(np);
      }
      if (cfg.k < 1 || cfg.k >= s.n_grid[0]) throw field_error("run.k", "must satisfy 1 <= k < n");
      break;
    }
    case ExperimentKind::localization:
      if (cfg.model != Model::pa) throw field_error("experiment.model", "localization uses model = pa");
      if (cfg.model_params.m != 1) throw field_error("graph.m", "localization requires m = 1");
      break;
    case ExperimentKind::figure1:
      if (s.n_grid.size() != 1) throw field_error("graph.n", "figure1 takes a single n");
      s.figure1_noise = {alphas.size() == 1 && c.has("noise.alpha") ? alphas[0] : 0.01,
                         betas.size() == 1 && c.has("noise.beta") ? betas[0] : 0.02};
      s.figure1_noise.validate();
      break;
  }

  Json e;
  e["name"] = s.name;
  e["kind"] = to_string(s.kind);
  e["model"] = to_string(cfg.model);
  e["seed_root"] = cfg.seed_root;
  e["centrality"] = to_string(cfg.centrality);
  e["n"] = s.n_grid;
  e["p"] = cfg.model_params.p;
  e["m"] = cfg.model_params.m;
  e["b"] = cfg.model_params.b;
  e["k_ring"] = cfg.model_params.k_ring;
  e["rewire_p"] = cfg.model_params.rewire_p;
  e["alpha"] = alphas;
  e["alpha_n_exponent"] = a_sched.n_exponent;
  e["alpha_log_exponent"] = a_sched.log_exponent;
  e["beta"] = betas;
  e["beta_n_exponent"] = b_sched.n_exponent;
  e["beta_log_exponent"] = b_sched.log_exponent;
  e["k"] = cfg.k;
  e["graphs"] = cfg.graphs_per_point;
  e["draws"] = cfg.noise_draws_per_graph;
  e["reps"] = s.reps;
  e["mean_degree"] = s.mean_degree;
  e["theory_curve"] = cfg.theory_curve;
  s.echo = std::move(e);
  return s;
}

/// Result tables of one experiment, as CSV text and as a JSON array.
struct ExperimentOutput {
  std::string csv;
  Json rows;
};

inline ExperimentOutput execute(const ExperimentSpec& s, unsigned threads = 0) {
  ExperimentOutput out;
  std::ostringstream os;
  switch (s.kind) {
    case ExperimentKind::topk: {
      auto cfg = s.topk;
      cfg.threads = threads;
      const auto rows = run_topk_experiment(cfg);
      write_summary_csv(os, rows);
      out.rows = summary_json(rows);
      break;
    }
    case ExperimentKind::jaccard: {
      const auto& c = s.topk;
      const auto rows = run_jaccard_comparison(s.n_grid[0], c.model_params.m, c.k, s.noise_grid, c.graphs_per_point,
                                               c.noise_draws_per_graph, c.seed_root, c.model_params.b, threads);
      write_summary_csv(os, rows);
      out.rows = summary_json(rows);
      break;
    }
    case ExperimentKind::localization: {
      const auto rows = run_localization(s.n_grid, s.reps, s.topk.model_params.b, s.topk.seed_root, threads);
      write_localization_csv(os, rows);
      out.rows = localization_json(rows);
      break;
    }
    case ExperimentKind::figure1: {
      const auto prof = run_figure1_profile(s.n_grid[0], s.mean_degree, s.figure1_noise, s.topk.seed_root);
      write_profile_csv(os, prof);
      out.rows = profile_json(prof);
      break;
    }
  }
  out.csv = os.str();
  return out;
}

}  // namespace noisytopk
