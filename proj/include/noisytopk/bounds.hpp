#pragma once

// Closed-form recovery conditions, infeasibility thresholds and error bounds
// for top-k identification from an edge-flip-noised graph.
//
// Conventions used throughout:
//   * log is the natural logarithm;
//   * degrees are indexed by 1-based rank in the non-increasing order
//     d_1 >= d_2 >= ... >= d_n (see DegreeSequence::sorted);
//   * asymptotic o(1) remainders are dropped, so every quantity here is a
//     leading-order evaluation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "noisytopk/centrality.hpp"
#include "noisytopk/graph.hpp"
#include "noisytopk/noise.hpp"

namespace noisytopk {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Default slowly-growing sequence: max(1, log log n).
inline double default_c_of_n(std::size_t n) {
  if (n < 3) return 1.0;
  return std::max(1.0, std::log(std::log(static_cast<double>(n))));
}

// ---------------------------------------------------------------------------
// Moments of a noisy degree
// ---------------------------------------------------------------------------

struct DegreeMoments {
  double mu = 0.0;
  double sigma2 = 0.0;
  double sigma() const { return std::sqrt(sigma2); }
};

/// Mean and variance of the observed degree of a node with latent degree d:
///   mu     = (n-1-d) alpha + d (1-beta)
///   sigma2 = (n-1-d) alpha (1-alpha) + d beta (1-beta)
inline DegreeMoments noisy_degree_moments(std::int64_t d, std::size_t n, const NoiseParams& p) {
  if (d < 0 || n < 1 || d > static_cast<std::int64_t>(n) - 1)
    throw std::invalid_argument("noisy_degree_moments: degree " + std::to_string(d) + " outside [0, n-1]");
  const double absent = static_cast<double>(static_cast<std::int64_t>(n) - 1 - d);
  const double present = static_cast<double>(d);
  return {absent * p.alpha + present * (1.0 - p.beta),
          absent * p.alpha * (1.0 - p.alpha) + present * p.beta * (1.0 - p.beta)};
}

// ---------------------------------------------------------------------------
// Correction terms
// ---------------------------------------------------------------------------

struct CorrectionTerms {
  double eps1 = 0.0;
  double eps2 = 0.0;
  double c_of_n = 0.0;
};

/// eps1(m) = log log m / (2 sqrt(2 log m)), eps2(n) = C(n) / sqrt(log n).
inline double eps1(std::size_t m) {
  if (m < 3) throw std::invalid_argument("eps1: requires m >= 3 (got " + std::to_string(m) + ")");
  const double lm = std::log(static_cast<double>(m));
  return std::log(lm) / (2.0 * std::sqrt(2.0 * lm));
}

inline double eps2(std::size_t n, double c_of_n) {
  if (n < 3) throw std::invalid_argument("eps2: requires n >= 3 (got " + std::to_string(n) + ")");
  if (!(c_of_n > 0.0)) throw std::invalid_argument("eps2: C(n) must be positive");
  return c_of_n / std::sqrt(std::log(static_cast<double>(n)));
}

inline CorrectionTerms correction_terms(std::size_t m, std::size_t n, double c_of_n) {
  return {eps1(m), eps2(n, c_of_n), c_of_n};
}

// ---------------------------------------------------------------------------
// Achievability: boundary / bulk separation
// ---------------------------------------------------------------------------

struct SeparationReport {
  std::size_t k = 0;
  std::size_t i_star = 0;
  double delta_bdry = 0.0;   ///< d_k - d_{k+1}
  double delta_bulk = 0.0;   ///< d_k - d_{i*}
  double L_k = 0.0;          ///< log(k / delta)
  double L_bdry = 0.0;       ///< log(k (i* - k) / delta)
  double sigma_bar_bdry = 0.0;
  double bulk_threshold = 0.0;
  double bdry_threshold = 0.0;
  double one_gap_threshold = 0.0;
  bool boundary_ok = false;
  bool bulk_ok = false;
  bool one_gap_ok = false;
  double snr = 0.0;          ///< (1-alpha-beta) delta_bdry / sigma_{k+1}; +inf when sigma is 0 and gap > 0
};

namespace detail {

inline void check_rank_args(const DegreeSequence& d, std::size_t k, std::size_t i_star, const NoiseParams& p,
                            const char* who) {
  p.validate();
  const std::size_t n = d.n();
  if (k < 1 || k >= n) throw std::invalid_argument(std::string(who) + ": need 1 <= k < n");
  if (i_star <= k) throw std::invalid_argument(std::string(who) + ": need i_star > k");
  if (i_star > n) throw std::invalid_argument(std::string(who) + ": need i_star <= n");
  if (!(p.alpha + p.beta < 1.0)) throw std::invalid_argument(std::string(who) + ": need alpha + beta < 1");
}

inline double sigma_at(const DegreeSequence& d, std::size_t rank, const NoiseParams& p) {
  return noisy_degree_moments(d.sorted(rank), d.n(), p).sigma();
}

// Extreme-value multiplier sqrt(2 log m) - eps1(m) +/- eps2(n).
inline double ev_multiplier(std::size_t m, std::size_t n, double c_of_n, double sign) {
  return std::sqrt(2.0 * std::log(static_cast<double>(m))) - eps1(m) + sign * eps2(n, c_of_n);
}

}  // namespace detail

/// Default bulk index: the smallest rank i > k (with n - i + 1 >= 3) such that
/// d_k - d_i >= 2 sqrt(2 log(n - i + 1)) sigma_i / (1 - alpha - beta);
/// falls back to k + 1.
inline std::size_t default_i_star(const DegreeSequence& d, std::size_t k, const NoiseParams& p) {
  const std::size_t n = d.n();
  const double scale = 1.0 - p.alpha - p.beta;
  const auto dk = static_cast<double>(d.sorted(k));
  for (std::size_t i = k + 1; i + 2 <= n; ++i) {
    const double need = 2.0 * std::sqrt(2.0 * std::log(static_cast<double>(n - i + 1))) * detail::sigma_at(d, i, p) / scale;
    if (dk - static_cast<double>(d.sorted(i)) >= need) return i;
  }
  return k + 1;
}

/// Evaluates the bulk and boundary separation conditions, the one-gap
/// condition and the SNR for a sorted latent degree sequence.
inline SeparationReport separation_report(const DegreeSequence& d, std::size_t k, std::size_t i_star,
                                          const NoiseParams& p, double delta, double c_of_n) {
  detail::check_rank_args(d, k, i_star, p, "separation_report");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("separation_report: delta must lie in (0, 1)");
  const std::size_t n = d.n();
  if (n - i_star + 1 < 3) throw std::invalid_argument("separation_report: need n - i_star + 1 >= 3");
  if (n - k < 3) throw std::invalid_argument("separation_report: need n - k >= 3");

  SeparationReport r;
  r.k = k;
  r.i_star = i_star;
  const double scale = 1.0 - p.alpha - p.beta;
  const auto dk = static_cast<double>(d.sorted(k));
  r.delta_bdry = dk - static_cast<double>(d.sorted(k + 1));
  r.delta_bulk = dk - static_cast<double>(d.sorted(i_star));
  r.L_k = std::log(static_cast<double>(k) / delta);
  r.L_bdry = std::log(static_cast<double>(k * (i_star - k)) / delta);

  // sigma_bar^2 = max_{i <= k, k < j < i*} (sigma_i^2 + sigma_j^2); the
  // inner range is empty when i* = k + 1, in which case sigma_bar = 0.
  double max_top = 0.0, max_mid = 0.0;
  for (std::size_t i = 1; i <= k; ++i) max_top = std::max(max_top, noisy_degree_moments(d.sorted(i), n, p).sigma2);
  bool have_mid = false;
  for (std::size_t j = k + 1; j < i_star; ++j) {
    max_mid = std::max(max_mid, noisy_degree_moments(d.sorted(j), n, p).sigma2);
    have_mid = true;
  }
  r.sigma_bar_bdry = have_mid ? std::sqrt(max_top + max_mid) : 0.0;

  const double sigma_k = detail::sigma_at(d, k, p);
  const double sigma_k1 = detail::sigma_at(d, k + 1, p);
  const double sigma_is = detail::sigma_at(d, i_star, p);

  r.bulk_threshold = (detail::ev_multiplier(n - i_star + 1, n, c_of_n, +1.0) * sigma_is +
                      sigma_k * std::sqrt(2.0 * r.L_k) + 2.0 / 3.0 * r.L_k) /
                     scale;
  r.bdry_threshold = (std::sqrt(2.0 * r.L_bdry) * r.sigma_bar_bdry + 2.0 / 3.0 * r.L_bdry) / scale;
  r.one_gap_threshold = (detail::ev_multiplier(n - k, n, c_of_n, +1.0) * sigma_k1 +
                         sigma_k * std::sqrt(2.0 * r.L_k) + 2.0 / 3.0 * r.L_k) /
                        scale;
  r.bulk_ok = r.delta_bulk >= r.bulk_threshold;
  r.boundary_ok = r.delta_bdry >= r.bdry_threshold;
  r.one_gap_ok = r.delta_bdry > 0.0 && r.delta_bdry >= r.one_gap_threshold;

  if (sigma_k1 > 0.0)
    r.snr = scale * r.delta_bdry / sigma_k1;
  else
    r.snr = r.delta_bdry > 0.0 ? kInf : 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Infeasibility thresholds
// ---------------------------------------------------------------------------

struct InfeasibilityReport {
  double delta_bulk_threshold = 0.0;
  double delta_bdry_threshold = 0.0;
  double delta_bdry_bar = 0.0;
  bool bulk_infeasible = false;
  bool bdry_infeasible = false;
  bool bdry_bar_infeasible = false;
};

/// Critical separations below which exact recovery fails with probability
/// bounded away from zero:
///   bulk  : (sqrt(2 log(n-i*+1)) - eps1(n-i*+1) - eps2(n)) sigma_{i*} / (1-a-b)
///   bdry  : c1 * 2 sqrt(2 log k) max(sigma_k, sigma_{k+1}) / (1-a-b)
///   bdry~ : (sqrt(2 log(n-k)) - eps1(n-k) - eps2(n)) sigma_{k+1} / (1-a-b)
/// Negative multipliers (possible at tiny n) are clamped at zero.
inline InfeasibilityReport infeasibility_report(const DegreeSequence& d, std::size_t k, std::size_t i_star,
                                                const NoiseParams& p, double c1, double c_of_n) {
  detail::check_rank_args(d, k, i_star, p, "infeasibility_report");
  if (!(c1 > 0.0 && c1 < 1.0)) throw std::invalid_argument("infeasibility_report: c1 must lie in (0, 1)");
  const std::size_t n = d.n();
  if (n - i_star + 1 < 3) throw std::invalid_argument("infeasibility_report: need n - i_star + 1 >= 3");
  if (n - k < 3) throw std::invalid_argument("infeasibility_report: need n - k >= 3");
  const double scale = 1.0 - p.alpha - p.beta;
  const double sigma_k = detail::sigma_at(d, k, p);
  const double sigma_k1 = detail::sigma_at(d, k + 1, p);
  const double sigma_is = detail::sigma_at(d, i_star, p);

  InfeasibilityReport r;
  r.delta_bulk_threshold = std::max(0.0, detail::ev_multiplier(n - i_star + 1, n, c_of_n, -1.0)) * sigma_is / scale;
  r.delta_bdry_threshold =
      c1 * 2.0 * std::sqrt(2.0 * std::log(static_cast<double>(k))) * std::max(sigma_k, sigma_k1) / scale;
  r.delta_bdry_bar = std::max(0.0, detail::ev_multiplier(n - k, n, c_of_n, -1.0)) * sigma_k1 / scale;

  const auto dk = static_cast<double>(d.sorted(k));
  const double bdry = dk - static_cast<double>(d.sorted(k + 1));
  const double bulk = dk - static_cast<double>(d.sorted(i_star));
  r.bulk_infeasible = bulk <= r.delta_bulk_threshold;
  r.bdry_infeasible = bdry <= r.delta_bdry_threshold;
  r.bdry_bar_infeasible = bdry <= r.delta_bdry_bar;
  return r;
}

// ---------------------------------------------------------------------------
// Hamming-distance sandwich for one realisation
// ---------------------------------------------------------------------------

struct HammingBounds {
  std::size_t lower = 0;
  std::size_t upper = 0;
  double t = 0.0;
};

/// Score of 1-based rank r among the noisy scores (r-th largest).
inline double order_statistic(const ScoreVector& s, std::size_t r) {
  if (r < 1 || r > s.size()) throw std::invalid_argument("order_statistic: rank out of range");
  std::vector<double> v = s.scores;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(r - 1), v.end(), std::greater<>());
  return v[r - 1];
}

/// Realised bounds at an arbitrary threshold t:
///   lower = 2 max(#{i in S: s_i < t}, #{i not in S: s_i > t})
///   upper = 2 min(#{i in S: s_i <= t}, #{i not in S: s_i >= t})
/// Both bracket d_H(S, S~) whenever s_(k+1) <= t <= s_(k).
inline HammingBounds hamming_bounds_at(const TopKSet& truth, const ScoreVector& noisy, double t) {
  std::size_t in_below = 0, out_above = 0, in_le = 0, out_ge = 0;
  for (NodeId i = 0; i < noisy.size(); ++i) {
    const double s = noisy.scores[i];
    if (truth.contains(i)) {
      in_below += s < t;
      in_le += s <= t;
    } else {
      out_above += s > t;
      out_ge += s >= t;
    }
  }
  return {2 * std::max(in_below, out_above), 2 * std::min(in_le, out_ge), t};
}

/// Bounds at t = the (k+1)-th largest noisy score.
inline HammingBounds hamming_bounds_realization(const TopKSet& truth, const ScoreVector& noisy, std::size_t k) {
  if (k >= noisy.size()) throw std::invalid_argument("hamming_bounds_realization: need k < n");
  if (truth.members.size() != k) throw std::invalid_argument("hamming_bounds_realization: |S| != k");
  return hamming_bounds_at(truth, noisy, order_statistic(noisy, k + 1));
}

// ---------------------------------------------------------------------------
// Dense ER lower bound on the expected Hamming distance
// ---------------------------------------------------------------------------

struct ErLowerBound {
  double c_n = 0.0;
  double value = 0.0;     ///< lower bound on (1/2) E d_H, leading order
  bool applicable = false;
};

/// c_n = [q - r] a(1-a) + [p - r] b(1-b), r = sqrt(2 p q log n / n), q = 1-p;
/// bound = k Phi(-2 C(n) / (sqrt(c_n) sqrt(log n))). Inapplicable if c_n <= 0.
inline ErLowerBound er_expected_hamming_lower_bound(std::size_t n, double p, const NoiseParams& noise, std::size_t k,
                                                    double c_of_n) {
  noise.validate();
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("er_expected_hamming_lower_bound: p must lie in (0, 1)");
  if (!(noise.alpha + noise.beta < 1.0)) throw std::invalid_argument("er_expected_hamming_lower_bound: need alpha + beta < 1");
  if (n < 3) throw std::invalid_argument("er_expected_hamming_lower_bound: need n >= 3");
  const double q = 1.0 - p;
  const double logn = std::log(static_cast<double>(n));
  const double r = std::sqrt(2.0 * p * q * logn / static_cast<double>(n));
  ErLowerBound out;
  out.c_n = (q - r) * noise.alpha * (1.0 - noise.alpha) + (p - r) * noise.beta * (1.0 - noise.beta);
  if (!(out.c_n > 0.0)) return out;
  out.applicable = true;
  out.value = static_cast<double>(k) * normal_cdf(-2.0 * c_of_n / (std::sqrt(out.c_n) * std::sqrt(logn)));
  return out;
}

// ---------------------------------------------------------------------------
// Tail envelope
// ---------------------------------------------------------------------------

struct TailEnvelope {
  double c_upper = 0.0;
  double c_lower = 0.0;
  double mu = 0.0;     ///< mu_{n,k+1}
  double sigma = 0.0;  ///< sigma_{n,k+1}
  double eps2 = 0.0;
};

/// c^u/l = mu_{k+1} + (sqrt(2 log m) - eps1(m) +/- eps2(n)) sigma_{k+1}, m = n - k.
inline TailEnvelope tail_envelope(const DegreeSequence& d, std::size_t k, const NoiseParams& p, double c_of_n) {
  p.validate();
  const std::size_t n = d.n();
  if (k < 1 || k >= n || n - k < 3) throw std::invalid_argument("tail_envelope: need 1 <= k and n - k >= 3");
  const auto mom = noisy_degree_moments(d.sorted(k + 1), n, p);
  TailEnvelope e;
  e.mu = mom.mu;
  e.sigma = mom.sigma();
  e.eps2 = eps2(n, c_of_n);
  const double base = std::sqrt(2.0 * std::log(static_cast<double>(n - k))) - eps1(n - k);
  e.c_upper = e.mu + (base + e.eps2) * e.sigma;
  e.c_lower = e.mu + (base - e.eps2) * e.sigma;
  return e;
}

// ---------------------------------------------------------------------------
// Eigenvector entrywise perturbation bound
// ---------------------------------------------------------------------------

struct EvecBound {
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
  double eps_n = kInf;
  bool gap_condition_ok = false;  ///< lambda1 - lambda2 > 2 B3 + 4 B2
  bool applicable = false;        ///< gap condition holds and lambda1 > B3
};

/// Noise envelopes
///   B1 = (a+b) sqrt(n) + 5 sqrt([(a+b) - (a-b)^2] log n)
///   B2 = sqrt(2 n (a+b) + log n)
///   B3 = 5 sqrt(n (a+b)) + a n + (a+b) ||A||
/// and the entrywise bound
///   eps_n = (g - 2B3 - 2B2)/(g - 2B3 - 4B2) (l2/l1 + |x|_inf) (2B3/g + B3/(l1 - B3))
///           + (2B1 + 2B2 |x|_inf)/(g - 2B3 - 4B2),   g = l1 - l2.
inline EvecBound evec_bound(double lambda1, double lambda2, double spectral_norm_a, double x_inf, std::size_t n,
                            const NoiseParams& p) {
  p.validate();
  if (n < 2) throw std::invalid_argument("evec_bound: need n >= 2");
  const double nn = static_cast<double>(n);
  const double logn = std::log(nn);
  const double s = p.alpha + p.beta;
  const double var_term = std::max(0.0, s - (p.alpha - p.beta) * (p.alpha - p.beta));
  EvecBound e;
  e.b1 = s * std::sqrt(nn) + 5.0 * std::sqrt(var_term * logn);
  e.b2 = std::sqrt(2.0 * nn * s + logn);
  e.b3 = 5.0 * std::sqrt(nn * s) + p.alpha * nn + s * spectral_norm_a;
  const double gap = lambda1 - lambda2;
  e.gap_condition_ok = gap > 2.0 * e.b3 + 4.0 * e.b2;
  if (!e.gap_condition_ok || !(lambda1 - e.b3 > 0.0)) return e;
  e.applicable = true;
  const double den = gap - 2.0 * e.b3 - 4.0 * e.b2;
  e.eps_n = (gap - 2.0 * e.b3 - 2.0 * e.b2) / den * (lambda2 / lambda1 + x_inf) *
                (2.0 * e.b3 / gap + e.b3 / (lambda1 - e.b3)) +
            (2.0 * e.b1 + 2.0 * e.b2 * x_inf) / den;
  return e;
}

inline EvecBound evec_bound(const SpectralPair& sp, std::size_t n, const NoiseParams& p) {
  double x_inf = 0.0;
  for (double v : sp.x.scores) x_inf = std::max(x_inf, std::abs(v));
  return evec_bound(sp.lambda1, sp.lambda2, std::abs(sp.lambda1), x_inf, n, p);
}

/// Top-k eigenvector gap condition x_(k) - x_(k+1) > 2 eps_n.
inline bool evec_gap_check(const SpectralPair& sp, std::size_t k, const EvecBound& bound) {
  const std::size_t n = sp.x.size();
  if (k < 1 || k >= n) throw std::invalid_argument("evec_gap_check: need 1 <= k < n");
  if (!bound.applicable || !std::isfinite(bound.eps_n)) return false;
  const double gap = order_statistic(sp.x, k) - order_statistic(sp.x, k + 1);
  return gap > 2.0 * bound.eps_n;
}

}  // namespace noisytopk
