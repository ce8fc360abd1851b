#pragma once

#include <optional>
#include <string>

#include "noisytopk/bounds.hpp"
#include "noisytopk/centrality.hpp"
#include "noisytopk/graph.hpp"
#include "noisytopk/io.hpp"

namespace noisytopk {

struct BoundOptions {
  std::size_t k = 5;
  NoiseParams noise;
  double delta = 0.05;
  double c1 = 0.5;
  std::optional<double> c_of_n;    ///< default: max(1, log log n)
  std::optional<std::size_t> i_star;  ///< default: default_i_star()
};

/// Every bound quantity evaluated for one latent graph.
struct BoundReport {
  std::size_t n = 0;
  std::size_t num_edges = 0;
  BoundOptions options;
  double c_of_n = 0.0;
  std::size_t i_star = 0;
  DegreeMoments moments_k, moments_k1;
  SeparationReport separation;
  InfeasibilityReport infeasibility;
  TailEnvelope envelope;
  double density = 0.0;
  ErLowerBound er_bound;
  SpectralPair spectral;
  EvecBound evec;
  bool evec_topk_ok = false;
  std::string regime;
};

/// Regime labels: recoverable-likely when the one-gap condition or both
/// separation conditions hold; otherwise infeasible-boundary /
/// infeasible-bulk when a critical threshold is met; else indeterminate.
inline std::string classify_regime(const SeparationReport& s, const InfeasibilityReport& inf) {
  if (s.one_gap_ok || (s.boundary_ok && s.bulk_ok)) return "recoverable-likely";
  if (inf.bdry_infeasible || inf.bdry_bar_infeasible) return "infeasible-boundary";
  if (inf.bulk_infeasible) return "infeasible-bulk";
  return "indeterminate";
}

inline BoundReport build_bound_report(const Graph& g, const BoundOptions& opt) {
  opt.noise.validate();
  const std::size_t n = g.n();
  if (n < 4) throw std::invalid_argument("bounds: need n >= 4");
  if (opt.k < 1 || opt.k + 3 > n) throw std::invalid_argument("bounds: need 1 <= k and n - k >= 3");
  if (!(opt.noise.alpha + opt.noise.beta < 1.0)) throw std::invalid_argument("bounds: need alpha + beta < 1");

  BoundReport r;
  r.n = n;
  r.num_edges = g.num_edges();
  r.options = opt;
  r.c_of_n = opt.c_of_n.value_or(default_c_of_n(n));
  if (!(r.c_of_n > 0.0)) throw std::invalid_argument("bounds: C(n) must be positive");
  const auto ds = degrees(g);
  r.i_star = opt.i_star.value_or(default_i_star(ds, opt.k, opt.noise));
  if (r.i_star <= opt.k || r.i_star + 2 > n) throw std::invalid_argument("bounds: need k < i_star <= n - 2");
  r.moments_k = noisy_degree_moments(ds.sorted(opt.k), n, opt.noise);
  r.moments_k1 = noisy_degree_moments(ds.sorted(opt.k + 1), n, opt.noise);
  r.separation = separation_report(ds, opt.k, r.i_star, opt.noise, opt.delta, r.c_of_n);
  r.infeasibility = infeasibility_report(ds, opt.k, r.i_star, opt.noise, opt.c1, r.c_of_n);
  r.envelope = tail_envelope(ds, opt.k, opt.noise, r.c_of_n);
  r.density = 2.0 * static_cast<double>(g.num_edges()) / (static_cast<double>(n) * static_cast<double>(n - 1));
  if (r.density > 0.0 && r.density < 1.0)
    r.er_bound = er_expected_hamming_lower_bound(n, r.density, opt.noise, opt.k, r.c_of_n);
  r.spectral = spectral_top2(g);
  r.evec = evec_bound(r.spectral, n, opt.noise);
  if (r.spectral.degenerate) {
    r.evec.applicable = false;
    r.evec.eps_n = kInf;
  }
  r.evec_topk_ok = evec_gap_check(r.spectral, opt.k, r.evec);
  r.regime = classify_regime(r.separation, r.infeasibility);
  return r;
}

inline Json to_json(const BoundReport& r) {
  Json j;
  j["n"] = r.n;
  j["num_edges"] = r.num_edges;
  j["k"] = r.options.k;
  j["alpha"] = r.options.noise.alpha;
  j["beta"] = r.options.noise.beta;
  j["delta"] = r.options.delta;
  j["c1"] = r.options.c1;
  j["c_of_n"] = r.c_of_n;
  j["i_star"] = r.i_star;
  j["leading_order"] = true;
  j["success_probability_floor"] = json_num(1.0 - 2.0 * r.options.delta);
  j["notes"] = "o(1) remainders omitted; ranks are 1-based in the non-increasing latent degree order";
  j["regime"] = r.regime;
  j["moments"] = {{"mu_k", r.moments_k.mu},
                  {"sigma2_k", r.moments_k.sigma2},
                  {"mu_k1", r.moments_k1.mu},
                  {"sigma2_k1", r.moments_k1.sigma2}};
  const auto& s = r.separation;
  j["separation"] = {{"delta_bdry", s.delta_bdry},
                     {"delta_bulk", s.delta_bulk},
                     {"L_k", s.L_k},
                     {"L_bdry", s.L_bdry},
                     {"sigma_bar_bdry", s.sigma_bar_bdry},
                     {"bulk_threshold", json_num(s.bulk_threshold)},
                     {"bdry_threshold", json_num(s.bdry_threshold)},
                     {"one_gap_threshold", json_num(s.one_gap_threshold)},
                     {"bulk_ok", s.bulk_ok},
                     {"boundary_ok", s.boundary_ok},
                     {"one_gap_ok", s.one_gap_ok},
                     {"snr", json_num(s.snr)}};
  const auto& inf = r.infeasibility;
  j["infeasibility"] = {{"delta_bulk_threshold", inf.delta_bulk_threshold},
                        {"delta_bdry_threshold", inf.delta_bdry_threshold},
                        {"delta_bdry_bar", inf.delta_bdry_bar},
                        {"bulk_infeasible", inf.bulk_infeasible},
                        {"bdry_infeasible", inf.bdry_infeasible},
                        {"bdry_bar_infeasible", inf.bdry_bar_infeasible}};
  j["tail_envelope"] = {{"c_upper", r.envelope.c_upper}, {"c_lower", r.envelope.c_lower}};
  j["er_hamming_lower_bound"] = {{"density", r.density},
                                 {"c_n", r.er_bound.c_n},
                                 {"applicable", r.er_bound.applicable},
                                 {"value", r.er_bound.applicable ? Json(r.er_bound.value) : Json(nullptr)}};
  double x_inf = 0.0;
  for (double v : r.spectral.x.scores) x_inf = std::max(x_inf, std::abs(v));
  j["eigenvector"] = {{"lambda1", r.spectral.lambda1},
                      {"lambda2", r.spectral.lambda2},
                      {"x_inf", x_inf},
                      {"converged", r.spectral.converged},
                      {"degenerate", r.spectral.degenerate},
                      {"disconnected", r.spectral.disconnected},
                      {"b1", r.evec.b1},
                      {"b2", r.evec.b2},
                      {"b3", r.evec.b3},
                      {"gap_condition_ok", r.evec.gap_condition_ok},
                      {"eps_n", json_num(r.evec.eps_n)},
                      {"topk_gap_ok", r.evec_topk_ok}};
  return j;
}

}  // namespace noisytopk
