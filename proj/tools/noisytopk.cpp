// noisytopk: generate graphs, apply edge-flip noise, compute centralities,
// evaluate recovery bounds and run Monte Carlo experiments.
//
// Exit codes: 0 success, 2 usage/validation error, 3 runtime error.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "noisytopk/noisytopk.hpp"

#ifndef NOISYTOPK_GIT_DESCRIBE
#define NOISYTOPK_GIT_DESCRIBE "unknown"
#endif

namespace fs = std::filesystem;
using namespace noisytopk;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct Globals {
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string format = "csv";
  std::string out;
  unsigned threads = 0;
  bool quiet = false;
};

// I/O failures map to exit code 3; std::invalid_argument maps to 2.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << content;
  if (!os) throw IoError("write failed for '" + path + "'");
}

Graph load_graph(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  return read_edge_list(is);
}

void emit(const Globals& g, const std::string& content) {
  if (g.out.empty())
    std::cout << content;
  else
    write_file(g.out, content);
}

void summary(const Globals& g, const std::string& line) {
  if (!g.quiet) std::cout << line << '\n';
}

std::string graph_summary(const Graph& gr) {
  std::ostringstream os;
  os << "n=" << gr.n() << " edges=" << gr.num_edges() << " mean_degree="
     << csv_num(gr.n() ? 2.0 * static_cast<double>(gr.num_edges()) / static_cast<double>(gr.n()) : 0.0);
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Top-k centrality recovery under edge-flip noise"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for all stochastic output")->each([&](const std::string&) { g.seed_given = true; });
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", g.out, "Output file (experiment: output directory)");
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");
  app.add_flag("--quiet", g.quiet, "Suppress the stdout summary");

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a latent graph and write it as an edge list");
  std::string model;
  std::size_t n = 0, m = 1, k_ring = 2;
  double p = 0.25, b = 1.0, rewire_p = 0.1;
  gen->add_option("model", model, "er | pa | sw")->required()->check(CLI::IsMember({"er", "pa", "sw"}));
  gen->add_option("--n", n, "Node count")->required();
  gen->add_option("--p", p, "ER edge probability");
  gen->add_option("--m", m, "PA edges per arriving node");
  gen->add_option("--b", b, "PA attachment offset (> -1)");
  gen->add_option("--k-ring", k_ring, "SW ring degree (even)");
  gen->add_option("--rewire-p", rewire_p, "SW rewiring probability");

  // perturb
  auto* pert = app.add_subcommand("perturb", "Apply edge-flip noise to an edge-list graph");
  std::string in_path;
  double alpha = 0.0, beta = 0.0;
  pert->add_option("--in", in_path, "Input edge list")->required();
  pert->add_option("--alpha", alpha, "Edge addition rate")->required();
  pert->add_option("--beta", beta, "Edge deletion rate")->required();

  // centrality
  auto* cent = app.add_subcommand("centrality", "Degree or eigenvector scores and the top-k set");
  std::string kind = "degree";
  std::size_t k = 5;
  cent->add_option("--in", in_path, "Input edge list")->required();
  cent->add_option("--kind", kind, "degree | eigenvector")->check(CLI::IsMember({"degree", "eigenvector"}));
  cent->add_option("--k", k, "Top-k size");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "Evaluate recovery and infeasibility bounds (JSON report)");
  double delta = 0.05, c1 = 0.5;
  std::optional<double> c_of_n;
  std::optional<std::size_t> i_star;
  bnd->add_option("--in", in_path, "Input edge list")->required();
  bnd->add_option("--k", k, "Top-k size");
  bnd->add_option("--alpha", alpha, "Edge addition rate")->required();
  bnd->add_option("--beta", beta, "Edge deletion rate")->required();
  bnd->add_option("--delta", delta, "Confidence parameter in (0, 1)");
  bnd->add_option("--c1", c1, "Constant in the boundary infeasibility threshold, in (0, 1)");
  bnd->add_option("--c-of-n", c_of_n, "Slowly growing C(n) (default max(1, log log n))");
  bnd->add_option("--i-star", i_star, "Bulk index i* (1-based rank; default: search rule)");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a configured Monte Carlo experiment");
  std::string config_path, timestamp;
  bool timing = false;
  exp->add_option("--config", config_path, "key=value experiment configuration")->required();
  exp->add_option("--timestamp", timestamp, "Timestamp used in output file names (default: current UTC time)");
  exp->add_flag("--timing", timing, "Record wall time in the JSON metadata");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      if (g.out.empty()) throw std::invalid_argument("generate: --out is required");
      Graph gr;
      if (model == "er")
        gr = generate_er(n, p, g.seed);
      else if (model == "pa")
        gr = generate_pa({n, m, b}, g.seed);
      else
        gr = generate_small_world(n, k_ring, rewire_p, g.seed);
      std::ostringstream os;
      write_edge_list(os, gr);
      write_file(g.out, os.str());
      summary(g, graph_summary(gr));
    } else if (pert->parsed()) {
      if (g.out.empty()) throw std::invalid_argument("perturb: --out is required");
      const Graph a = load_graph(in_path);
      const Graph y = apply_noise(a, {alpha, beta}, g.seed);
      std::ostringstream os;
      write_edge_list(os, y);
      write_file(g.out, os.str());
      summary(g, graph_summary(y));
    } else if (cent->parsed()) {
      const Graph a = load_graph(in_path);
      if (a.n() < 2 && kind == "eigenvector") throw std::invalid_argument("centrality: eigenvector needs n >= 2");
      ScoreVector scores;
      std::optional<SpectralPair> sp;
      if (kind == "degree") {
        scores = degree_scores(a);
      } else {
        sp = spectral_top2(a);
        scores = sp->x;
      }
      const TopKSet top = top_k(scores, k, g.seed);
      std::ostringstream os;
      if (g.format == "json") {
        Json j;
        j["kind"] = kind;
        j["k"] = k;
        j["tie_broken"] = top.tie_broken;
        j["top_k"] = top.members;
        if (sp) {
          j["lambda1"] = sp->lambda1;
          j["lambda2"] = sp->lambda2;
          j["converged"] = sp->converged;
          j["degenerate"] = sp->degenerate;
          j["disconnected"] = sp->disconnected;
        }
        Json arr = Json::array();
        for (double v : scores.scores) arr.push_back(json_num(v));
        j["scores"] = std::move(arr);
        os << j.dump(2) << '\n';
      } else {
        os << "node,score,in_top_k\n";
        for (NodeId i = 0; i < scores.size(); ++i)
          os << i << ',' << csv_num(scores.scores[i]) << ',' << (top.contains(i) ? 1 : 0) << '\n';
      }
      emit(g, os.str());
      if (!g.out.empty()) {
        std::ostringstream line;
        line << kind << " top-" << k << ":";
        for (auto v : top.members) line << ' ' << v;
        if (top.tie_broken) line << " (cutoff tie broken at random)";
        summary(g, line.str());
      }
    } else if (bnd->parsed()) {
      const Graph a = load_graph(in_path);
      BoundOptions opt;
      opt.k = k;
      opt.noise = {alpha, beta};
      opt.delta = delta;
      opt.c1 = c1;
      opt.c_of_n = c_of_n;
      opt.i_star = i_star;
      const BoundReport rep = build_bound_report(a, opt);
      emit(g, to_json(rep).dump(2) + "\n");
      if (!g.out.empty()) summary(g, "regime: " + rep.regime);
    } else if (exp->parsed()) {
      std::ifstream is(config_path);
      if (!is) throw IoError("cannot open config '" + config_path + "'");
      ExperimentSpec spec = experiment_from_config(ConfigFile::parse(is));
      if (g.seed_given) {
        spec.topk.seed_root = g.seed;
        spec.echo["seed_root"] = g.seed;
      }
      const fs::path dir = g.out.empty() ? fs::path(".") : fs::path(g.out);
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");

      const auto t0 = std::chrono::steady_clock::now();
      const ExperimentOutput res = execute(spec, g.threads);
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

      const std::string stamp = timestamp.empty() ? utc_timestamp() : timestamp;
      const std::string base = spec.name + "_" + to_string(spec.topk.model) + "_" + stamp;
      Json doc;
      doc["meta"] = {{"config", spec.echo},
                     {"seed_root", spec.topk.seed_root},
                     {"git_describe", NOISYTOPK_GIT_DESCRIBE},
                     {"wall_time_seconds", timing ? Json(wall) : Json(nullptr)},
                     {"leading_order_bounds", true}};
      doc["rows"] = res.rows;
      write_file((dir / (base + ".csv")).string(), res.csv);
      write_file((dir / (base + ".json")).string(), doc.dump(2) + "\n");
      summary(g, "wrote " + (dir / (base + ".csv")).string() + " and .json");
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
