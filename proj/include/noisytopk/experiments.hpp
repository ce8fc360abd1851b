#pragma once

// Monte Carlo harness: repeated (latent graph, noisy observation) trials with
// top-k recovery metrics, eigenvector localization diagnostics, and the
// degree/eigenvector overlap comparison.
//
// Seed splitting (all via derive_seed, see rng.hpp):
//   latent graph      derive_seed(root, {stream::graph, point, graph})
//   noise draw        derive_seed(root, {stream::noise, point, graph, draw})
//   top-k ties        derive_seed(root, {stream::ties,  point, graph, draw, kind})
// The tie seed of a draw is used for both the latent and the noisy top-k set.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "noisytopk/bounds.hpp"
#include "noisytopk/centrality.hpp"
#include "noisytopk/generators.hpp"
#include "noisytopk/graph.hpp"
#include "noisytopk/noise.hpp"
#include "noisytopk/rng.hpp"
#include "noisytopk/stats.hpp"

namespace noisytopk {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class Model { er, pa, sw };
enum class CentralityChoice { degree, eigenvector, both };

inline const char* to_string(Model m) {
  switch (m) {
    case Model::er: return "er";
    case Model::pa: return "pa";
    case Model::sw: return "sw";
  }
  return "?";
}

inline const char* to_string(CentralityChoice c) {
  switch (c) {
    case CentralityChoice::degree: return "degree";
    case CentralityChoice::eigenvector: return "eigenvector";
    case CentralityChoice::both: return "both";
  }
  return "?";
}

/// Parameters of the latent graph model; only the fields of the active model are used.
struct ModelParams {
  double p = 0.25;         // er
  std::size_t m = 5;       // pa
  double b = 1.0;          // pa
  std::size_t k_ring = 24; // sw
  double rewire_p = 0.1;   // sw
};

inline Graph generate(Model model, std::size_t n, const ModelParams& mp, std::uint64_t seed) {
  switch (model) {
    case Model::er: return generate_er(n, mp.p, seed);
    case Model::pa: return generate_pa({n, mp.m, mp.b}, seed);
    case Model::sw: return generate_small_world(n, mp.k_ring, mp.rewire_p, seed);
  }
  throw std::invalid_argument("unknown model");
}

/// Noise rate that may scale with n: rate(n) = coef * n^n_exponent * (log n)^log_exponent.
struct RateSchedule {
  double coef = 0.0;
  double n_exponent = 0.0;
  double log_exponent = 0.0;

  double at(std::size_t n) const {
    double r = coef;
    if (n_exponent != 0.0) r *= std::pow(static_cast<double>(n), n_exponent);
    if (log_exponent != 0.0) r *= std::pow(std::log(static_cast<double>(n)), log_exponent);
    return r;
  }

  bool constant() const { return n_exponent == 0.0 && log_exponent == 0.0; }
};

/// One grid point of a top-k experiment.
struct GridPoint {
  double x_value = 0.0;
  std::size_t n = 0;
  NoiseParams noise;
};

struct ExperimentConfig {
  Model model = Model::er;
  ModelParams model_params;
  std::size_t k = 5;
  std::vector<GridPoint> points;
  std::size_t graphs_per_point = 100;
  std::size_t noise_draws_per_graph = 100;
  std::uint64_t seed_root = 0;
  CentralityChoice centrality = CentralityChoice::degree;
  bool theory_curve = true;
  unsigned threads = 0;  ///< 0: hardware concurrency

  void validate() const {
    if (graphs_per_point < 1) throw std::invalid_argument("experiment: graphs_per_point must be >= 1");
    if (noise_draws_per_graph < 1) throw std::invalid_argument("experiment: noise_draws_per_graph must be >= 1");
    if (points.empty()) throw std::invalid_argument("experiment: grid is empty");
    for (std::size_t i = 1; i < points.size(); ++i)
      if (!(points[i].x_value > points[i - 1].x_value))
        throw std::invalid_argument("experiment: grid must be strictly increasing");
    for (const auto& p : points) {
      p.noise.validate();
      if (k < 1 || k >= p.n) throw std::invalid_argument("experiment: need 1 <= k < n at every grid point");
    }
  }
};

/// Grid over n with noise rates evaluated from schedules at each n.
inline std::vector<GridPoint> grid_over_n(const std::vector<std::size_t>& ns, const RateSchedule& alpha,
                                          const RateSchedule& beta) {
  std::vector<GridPoint> pts;
  for (auto n : ns) pts.push_back({static_cast<double>(n), n, {alpha.at(n), beta.at(n)}});
  return pts;
}

/// Grid over noise levels at a fixed n; x is alpha.
inline std::vector<GridPoint> grid_over_alpha(std::size_t n, const std::vector<double>& alphas, double beta) {
  std::vector<GridPoint> pts;
  for (double a : alphas) pts.push_back({a, n, {a, beta}});
  return pts;
}

struct SummaryRow {
  double x_value = 0.0;
  std::size_t n = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double mean_half_hamming = 0.0, se_half_hamming = 0.0;
  // Lower/upper bounds are reported on the d_H / 2 scale.
  double mean_lower_bound = 0.0, se_lower_bound = 0.0;    // indicator version
  double mean_upper_bound = 0.0, se_upper_bound = 0.0;
  double exp_lower_bound = 0.0, se_exp_lower_bound = 0.0; // expectation version
  double exp_upper_bound = 0.0, se_exp_upper_bound = 0.0;
  double theory_lower = kNaN;
  double exact_recovery_rate = 0.0, se_exact_recovery = 0.0;
  double jaccard_degree = kNaN, se_jaccard_degree = kNaN;
  double jaccard_evec = kNaN, se_jaccard_evec = kNaN;
  std::size_t trials = 0;
  std::size_t excluded_trials = 0;
  std::size_t disconnected_trials = 0;
};

/// Runs fn(i) for i in [0, count) on up to `threads` workers. fn must only
/// write to per-index state.
inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      (void)t;
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

namespace detail {

struct GraphTally {
  Accumulator half_hamming, lower, upper, exact, jac_degree, jac_evec;
  // Sums over draws of the four counts entering the expectation-based bounds.
  Accumulator in_below, out_above, in_le, out_ge;
  std::size_t excluded = 0;
  std::size_t disconnected = 0;
};

inline std::uint64_t ties_seed(std::uint64_t root, std::size_t point, std::size_t graph, std::size_t draw,
                               ScoreKind kind) {
  return derive_seed(root, {stream::ties, point, graph, draw, static_cast<std::uint64_t>(kind)});
}

}  // namespace detail

/// Top-k recovery experiment over a grid of (n, noise) points.
///
/// Every trial asserts the realised sandwich lower <= d_H <= upper and
/// throws std::logic_error if it is violated.
inline std::vector<SummaryRow> run_topk_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const bool want_degree = cfg.centrality != CentralityChoice::eigenvector;
  const bool want_evec = cfg.centrality != CentralityChoice::degree;
  const ScoreKind primary = want_degree ? ScoreKind::degree : ScoreKind::eigenvector;
  const std::size_t k = cfg.k;

  std::vector<SummaryRow> rows;
  for (std::size_t pi = 0; pi < cfg.points.size(); ++pi) {
    const GridPoint& pt = cfg.points[pi];
    std::vector<detail::GraphTally> tallies(cfg.graphs_per_point);

    parallel_for(cfg.graphs_per_point, cfg.threads, [&](std::size_t gi) {
      auto& tally = tallies[gi];
      const Graph a = generate(cfg.model, pt.n, cfg.model_params, derive_seed(cfg.seed_root, {stream::graph, pi, gi}));
      const ScoreVector latent_deg = degree_scores(a);
      ScoreVector latent_evec;
      if (want_evec) latent_evec = principal_eigenpair(a).x;

      for (std::size_t di = 0; di < cfg.noise_draws_per_graph; ++di) {
        const std::uint64_t noise_seed = derive_seed(cfg.seed_root, {stream::noise, pi, gi, di});
        ScoreVector noisy_deg;
        std::optional<PrincipalPair> noisy_evec;
        if (want_evec) {
          const Graph y = apply_noise(a, pt.noise, noise_seed);
          noisy_deg = degree_scores(y);
          noisy_evec = principal_eigenpair(y);
          if (noisy_evec->disconnected) ++tally.disconnected;
        } else {
          noisy_deg = degree_scores(noisy_degrees(a, pt.noise, noise_seed));
        }

        const bool evec_ok = !want_evec || noisy_evec->converged;
        if (want_evec && !evec_ok) ++tally.excluded;

        // Latent and noisy sets share one tie seed per draw, so identical
        // score vectors always give identical sets.
        const std::uint64_t deg_ties = detail::ties_seed(cfg.seed_root, pi, gi, di, ScoreKind::degree);
        const std::uint64_t evec_ties = detail::ties_seed(cfg.seed_root, pi, gi, di, ScoreKind::eigenvector);
        const TopKSet truth_deg = top_k(latent_deg, k, deg_ties);
        const TopKSet est_deg = top_k(noisy_deg, k, deg_ties);
        if (want_degree) tally.jac_degree.add(jaccard(truth_deg, est_deg));
        std::optional<TopKSet> truth_evec, est_evec;
        if (want_evec && evec_ok) {
          truth_evec = top_k(latent_evec, k, evec_ties);
          est_evec = top_k(noisy_evec->x, k, evec_ties);
          tally.jac_evec.add(jaccard(*truth_evec, *est_evec));
        }

        if (primary == ScoreKind::eigenvector && !evec_ok) continue;
        const TopKSet& truth = primary == ScoreKind::degree ? truth_deg : *truth_evec;
        const ScoreVector& scores = primary == ScoreKind::degree ? noisy_deg : noisy_evec->x;
        const TopKSet& est = primary == ScoreKind::degree ? est_deg : *est_evec;
        const std::size_t dh = hamming(truth, est);
        const double t = order_statistic(scores, k + 1);
        const HammingBounds hb = hamming_bounds_at(truth, scores, t);
        if (hb.lower > dh || dh > hb.upper)
          throw std::logic_error("Hamming sandwich violated at grid point " + std::to_string(pi));

        std::size_t in_below = 0, out_above = 0, in_le = 0, out_ge = 0;
        for (NodeId i = 0; i < scores.size(); ++i) {
          const double s = scores.scores[i];
          if (truth.contains(i)) {
            in_below += s < t;
            in_le += s <= t;
          } else {
            out_above += s > t;
            out_ge += s >= t;
          }
        }
        tally.half_hamming.add(static_cast<double>(dh) / 2.0);
        tally.lower.add(static_cast<double>(hb.lower) / 2.0);
        tally.upper.add(static_cast<double>(hb.upper) / 2.0);
        tally.exact.add(dh == 0 ? 1.0 : 0.0);
        tally.in_below.add(static_cast<double>(in_below));
        tally.out_above.add(static_cast<double>(out_above));
        tally.in_le.add(static_cast<double>(in_le));
        tally.out_ge.add(static_cast<double>(out_ge));
      }
    });

    ClusteredMean hh, lo, up, elo, eup, ex, jd, je;
    SummaryRow row;
    row.x_value = pt.x_value;
    row.n = pt.n;
    row.alpha = pt.noise.alpha;
    row.beta = pt.noise.beta;
    for (const auto& t : tallies) {
      hh.add_graph(t.half_hamming);
      lo.add_graph(t.lower);
      up.add_graph(t.upper);
      ex.add_graph(t.exact);
      jd.add_graph(t.jac_degree);
      je.add_graph(t.jac_evec);
      if (t.half_hamming.count > 0) {
        Accumulator el, eu;
        el.add(std::max(t.in_below.mean(), t.out_above.mean()));
        eu.add(std::min(t.in_le.mean(), t.out_ge.mean()));
        elo.add_graph(el);
        eup.add_graph(eu);
      }
      row.trials += t.half_hamming.count;
      row.excluded_trials += t.excluded;
      row.disconnected_trials += t.disconnected;
    }
    row.mean_half_hamming = hh.mean();
    row.se_half_hamming = hh.std_error();
    row.mean_lower_bound = lo.mean();
    row.se_lower_bound = lo.std_error();
    row.mean_upper_bound = up.mean();
    row.se_upper_bound = up.std_error();
    row.exp_lower_bound = elo.mean();
    row.se_exp_lower_bound = elo.std_error();
    row.exp_upper_bound = eup.mean();
    row.se_exp_upper_bound = eup.std_error();
    row.exact_recovery_rate = ex.mean();
    row.se_exact_recovery = ex.std_error();
    if (want_degree) {
      row.jaccard_degree = jd.mean();
      row.se_jaccard_degree = jd.std_error();
    }
    if (want_evec) {
      row.jaccard_evec = je.mean();
      row.se_jaccard_evec = je.std_error();
    }
    if (cfg.theory_curve && cfg.model == Model::er && pt.noise.alpha + pt.noise.beta < 1.0 &&
        cfg.model_params.p > 0.0 && cfg.model_params.p < 1.0 && pt.n >= 3) {
      const auto lb = er_expected_hamming_lower_bound(pt.n, cfg.model_params.p, pt.noise, k, default_c_of_n(pt.n));
      if (lb.applicable) row.theory_lower = lb.value;
    }
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Localization diagnostics
// ---------------------------------------------------------------------------

struct HubDiagnostics {
  NodeId hub = 0;
  bool hub_tied = false;
  double x_h = 0.0;
  double m_out = 0.0;  ///< sum of x_i^2 over nodes outside {h} and N(h)
  double gap = 0.0;    ///< x_h - max_{i in N(h)} x_i
  bool converged = true;
};

/// Hub statistics of the l2-normalised principal eigenvector. The hub is
/// the maximum-degree node (smallest id among ties, with hub_tied set).
inline HubDiagnostics hub_diagnostics(const Graph& g, const PrincipalPair& pp) {
  HubDiagnostics d;
  std::size_t best = g.degree(0);
  std::size_t count_best = 1;
  for (NodeId i = 1; i < g.n(); ++i) {
    if (g.degree(i) > best) {
      best = g.degree(i);
      d.hub = i;
      count_best = 1;
    } else if (g.degree(i) == best) {
      ++count_best;
    }
  }
  d.hub_tied = count_best > 1;
  const auto& x = pp.x.scores;
  d.x_h = x[d.hub];
  std::vector<char> near(g.n(), 0);
  near[d.hub] = 1;
  double max_nb = -kInf;
  for (NodeId j : g.neighbors(d.hub)) {
    near[j] = 1;
    max_nb = std::max(max_nb, x[j]);
  }
  for (NodeId i = 0; i < g.n(); ++i)
    if (!near[i]) d.m_out += x[i] * x[i];
  d.gap = std::isfinite(max_nb) ? d.x_h - max_nb : d.x_h;
  d.converged = pp.converged;
  return d;
}

struct LocalizationRow {
  std::size_t n = 0;
  std::size_t reps = 0;
  double x_h_mean = 0.0, x_h_se = 0.0, x_h_q10 = 0.0, x_h_q50 = 0.0, x_h_q90 = 0.0;
  double m_out_mean = 0.0, m_out_se = 0.0, m_out_q10 = 0.0, m_out_q50 = 0.0, m_out_q90 = 0.0;
  double gap_mean = 0.0, gap_se = 0.0, gap_q10 = 0.0, gap_q50 = 0.0, gap_q90 = 0.0;
  std::size_t hub_ties = 0;
  std::size_t nonconverged = 0;
};

/// Localization of the principal eigenvector in PA trees (m = 1).
inline std::vector<LocalizationRow> run_localization(const std::vector<std::size_t>& n_grid, std::size_t reps,
                                                     double b, std::uint64_t seed_root, unsigned threads = 0,
                                                     std::size_t m = 1) {
  if (m != 1) throw std::invalid_argument("run_localization: requires m = 1");
  if (reps < 1) throw std::invalid_argument("run_localization: reps must be >= 1");
  if (n_grid.empty()) throw std::invalid_argument("run_localization: empty grid");
  std::vector<LocalizationRow> rows;
  for (std::size_t pi = 0; pi < n_grid.size(); ++pi) {
    const std::size_t n = n_grid[pi];
    std::vector<HubDiagnostics> diag(reps);
    parallel_for(reps, threads, [&](std::size_t r) {
      const Graph g = generate_pa({n, m, b}, derive_seed(seed_root, {stream::graph, pi, r}));
      diag[r] = hub_diagnostics(g, principal_eigenpair(g));
    });
    LocalizationRow row;
    row.n = n;
    std::vector<double> xh, mo, gp;
    Accumulator axh, amo, agp;
    for (const auto& d : diag) {
      if (!d.converged) {
        ++row.nonconverged;
        continue;
      }
      row.hub_ties += d.hub_tied;
      xh.push_back(d.x_h);
      mo.push_back(d.m_out);
      gp.push_back(d.gap);
      axh.add(d.x_h);
      amo.add(d.m_out);
      agp.add(d.gap);
    }
    row.reps = xh.size();
    if (!xh.empty()) {
      row.x_h_mean = axh.mean();
      row.x_h_se = axh.std_error();
      row.m_out_mean = amo.mean();
      row.m_out_se = amo.std_error();
      row.gap_mean = agp.mean();
      row.gap_se = agp.std_error();
      row.x_h_q10 = quantile(xh, 0.1);
      row.x_h_q50 = quantile(xh, 0.5);
      row.x_h_q90 = quantile(xh, 0.9);
      row.m_out_q10 = quantile(mo, 0.1);
      row.m_out_q50 = quantile(mo, 0.5);
      row.m_out_q90 = quantile(mo, 0.9);
      row.gap_q10 = quantile(gp, 0.1);
      row.gap_q50 = quantile(gp, 0.5);
      row.gap_q90 = quantile(gp, 0.9);
    }
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Degree vs eigenvector overlap
// ---------------------------------------------------------------------------

/// Mean Jaccard overlap of true and noisy top-k sets under degree and
/// eigenvector centrality on PA graphs, one row per noise level.
inline std::vector<SummaryRow> run_jaccard_comparison(std::size_t n, std::size_t m, std::size_t k,
                                                      const std::vector<NoiseParams>& noise_grid, std::size_t graphs,
                                                      std::size_t draws, std::uint64_t seed_root, double b = 1.0,
                                                      unsigned threads = 0) {
  if (noise_grid.empty()) throw std::invalid_argument("run_jaccard_comparison: empty noise grid");
  ExperimentConfig cfg;
  cfg.model = Model::pa;
  cfg.model_params.m = m;
  cfg.model_params.b = b;
  cfg.k = k;
  cfg.graphs_per_point = graphs;
  cfg.noise_draws_per_graph = draws;
  cfg.seed_root = seed_root;
  cfg.centrality = CentralityChoice::both;
  cfg.theory_curve = false;
  cfg.threads = threads;
  // Each noise level is its own grid point; x is the level index so that the
  // grid stays strictly increasing even when alpha repeats.
  std::vector<SummaryRow> rows;
  for (std::size_t i = 0; i < noise_grid.size(); ++i) {
    cfg.points = {{static_cast<double>(i), n, noise_grid[i]}};
    cfg.seed_root = derive_seed(seed_root, {i});
    auto r = run_topk_experiment(cfg);
    r.front().x_value = noise_grid[i].alpha;
    rows.push_back(r.front());
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Ordered degree profiles before and after noise
// ---------------------------------------------------------------------------

struct ProfileEntry {
  std::size_t rank = 0;  ///< 1-based
  NodeId node = 0;
  std::int64_t original_degree = 0;
  std::int64_t noisy_degree = 0;
};

struct ModelProfile {
  Model model = Model::er;
  std::string parameters;
  std::vector<ProfileEntry> entries;
};

/// ER/SW/PA instances matched to a target mean degree, ranked by latent
/// degree, with the observed degree of the same node alongside. SW uses the
/// even ring degree nearest to the target (lower on ties), PA uses
/// m = floor(mean_degree / 2) with b = 1.
inline std::vector<ModelProfile> run_figure1_profile(std::size_t n, std::size_t mean_degree, const NoiseParams& noise,
                                                     std::uint64_t seed) {
  noise.validate();
  if (mean_degree == 0 || mean_degree >= n) throw std::invalid_argument("figure1: need 0 < mean_degree < n");
  const std::size_t pa_m = mean_degree / 2;
  if (pa_m < 1 || pa_m >= n) throw std::invalid_argument("figure1: PA mean degree ~2m cannot match the target");
  std::size_t k_ring = mean_degree % 2 == 0 ? mean_degree : mean_degree - 1;
  if (k_ring == 0) k_ring = 2;
  if (k_ring >= n) throw std::invalid_argument("figure1: SW ring degree must be < n");

  std::vector<ModelProfile> out;
  const Model models[] = {Model::er, Model::sw, Model::pa};
  for (std::size_t mi = 0; mi < 3; ++mi) {
    ModelProfile prof;
    prof.model = models[mi];
    const std::uint64_t gseed = derive_seed(seed, {stream::graph, mi});
    Graph g;
    switch (prof.model) {
      case Model::er: {
        const double p = static_cast<double>(mean_degree) / static_cast<double>(n - 1);
        g = generate_er(n, p, gseed);
        prof.parameters = "p=" + std::to_string(p);
        break;
      }
      case Model::sw:
        g = generate_small_world(n, k_ring, 0.1, gseed);
        prof.parameters = "k_ring=" + std::to_string(k_ring) + " rewire_p=0.1";
        break;
      case Model::pa:
        g = generate_pa({n, pa_m, 1.0}, gseed);
        prof.parameters = "m=" + std::to_string(pa_m) + " b=1";
        break;
    }
    const auto ds = degrees(g);
    const auto noisy = noisy_degrees(g, noise, derive_seed(seed, {stream::noise, mi}));
    for (std::size_t r = 0; r < n; ++r) {
      const NodeId v = ds.order[r];
      prof.entries.push_back({r + 1, v, ds.degrees[v], noisy[v]});
    }
    out.push_back(std::move(prof));
  }
  return out;
}

}  // namespace noisytopk
