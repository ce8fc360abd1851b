#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "noisytopk/graph.hpp"
#include "noisytopk/rng.hpp"

namespace noisytopk {

enum class ScoreKind { degree, eigenvector };

inline const char* to_string(ScoreKind k) { return k == ScoreKind::degree ? "degree" : "eigenvector"; }

struct ScoreVector {
  std::vector<double> scores;
  ScoreKind kind = ScoreKind::degree;

  std::size_t size() const noexcept { return scores.size(); }
};

inline ScoreVector degree_scores(const Graph& g) {
  ScoreVector s;
  s.kind = ScoreKind::degree;
  s.scores.resize(g.n());
  for (NodeId i = 0; i < g.n(); ++i) s.scores[i] = static_cast<double>(g.degree(i));
  return s;
}

inline ScoreVector degree_scores(const std::vector<std::int64_t>& d) {
  ScoreVector s;
  s.scores.assign(d.begin(), d.end());
  return s;
}

// ---------------------------------------------------------------------------
// Spectral solver
// ---------------------------------------------------------------------------

struct SpectralOptions {
  double tol = 1e-10;
  std::size_t max_iter = 10000;
};

struct PrincipalPair {
  double lambda1 = 0.0;
  ScoreVector x{{}, ScoreKind::eigenvector};
  std::size_t iterations = 0;
  bool converged = false;
  bool disconnected = false;
};

struct SpectralPair {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  ScoreVector x{{}, ScoreKind::eigenvector};
  std::size_t iterations1 = 0;
  std::size_t iterations2 = 0;
  bool converged = false;    ///< both power iterations met the residual target
  bool degenerate = false;   ///< lambda1 - lambda2 <= 1e-8
  bool disconnected = false;
};

namespace detail {

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  return std::sqrt(s);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double residual(const Graph& g, std::span<const double> v, double lambda, std::vector<double>& work) {
  g.multiply(v, work);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = work[i] - lambda * v[i];
    s += r * r;
  }
  return std::sqrt(s);
}

// Power iteration on (A + shift I) restricted to the orthogonal complement of
// `deflate` (if non-empty). Stops when successive unit iterates differ by at
// most tol in l2. Returns the Rayleigh quotient of A.
inline double power_iterate(const Graph& g, std::vector<double>& v, double shift, std::span<const double> deflate,
                            const SpectralOptions& opt, std::size_t& iters) {
  const std::size_t n = g.n();
  std::vector<double> w(n);
  auto project = [&](std::vector<double>& u) {
    if (deflate.empty()) return;
    const double c = dot(u, deflate);
    for (std::size_t i = 0; i < n; ++i) u[i] -= c * deflate[i];
  };
  project(v);
  double nv = norm2(v);
  for (auto& a : v) a /= nv;
  iters = 0;
  while (iters < opt.max_iter) {
    ++iters;
    g.multiply(v, w);
    for (std::size_t i = 0; i < n; ++i) w[i] += shift * v[i];
    project(w);
    const double nw = norm2(w);
    if (nw == 0.0) break;  // v lies in the null space of the shifted operator
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] /= nw;
      const double d = w[i] - v[i];
      diff += d * d;
    }
    v.swap(w);
    if (std::sqrt(diff) <= opt.tol) break;
  }
  g.multiply(v, w);
  return dot(v, w);
}

}  // namespace detail

/// Leading eigenpair of the adjacency matrix by power iteration from the
/// all-ones vector on A + I. The unit shift keeps lambda_1 strictly dominant
/// on bipartite graphs, where -lambda_1 is also an eigenvalue.
///
/// The sign is fixed so the largest-magnitude entry is positive; entries in
/// [-1e-9, 0) are then clamped to zero.
inline PrincipalPair principal_eigenpair(const Graph& g, const SpectralOptions& opt = {}) {
  if (g.n() == 0) throw std::invalid_argument("principal_eigenpair: empty node set");
  PrincipalPair out;
  std::vector<double> v(g.n(), 1.0);
  out.lambda1 = detail::power_iterate(g, v, 1.0, {}, opt, out.iterations);
  std::size_t arg = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  if (v[arg] < 0)
    for (auto& a : v) a = -a;
  for (auto& a : v)
    if (a < 0.0 && a >= -1e-9) a = 0.0;
  std::vector<double> work(g.n());
  const double res = detail::residual(g, v, out.lambda1, work);
  out.converged = res <= opt.tol * std::max(1.0, std::abs(out.lambda1)) || out.iterations < opt.max_iter;
  out.disconnected = count_components(g) > 1;
  out.x.scores = std::move(v);
  return out;
}

/// Two largest eigenvalues and the principal eigenvector.
///
/// lambda2 comes from a second power iteration on A + lambda1 I restricted
/// to the complement of x; the shift makes every remaining eigenvalue
/// non-negative so the iteration targets the algebraically second-largest
/// eigenvalue rather than the most negative one.
inline SpectralPair spectral_top2(const Graph& g, const SpectralOptions& opt = {}) {
  if (g.n() < 2) throw std::invalid_argument("spectral_top2: need n >= 2");
  auto p = principal_eigenpair(g, opt);
  SpectralPair out;
  out.lambda1 = p.lambda1;
  out.iterations1 = p.iterations;
  out.disconnected = p.disconnected;

  // Deterministic start vector with generic components.
  Rng rng(0x5eedULL ^ g.n());
  std::vector<double> v(g.n());
  for (auto& a : v) a = uniform01(rng) - 0.5;
  const double shift = std::max(std::abs(p.lambda1), 1.0);
  out.lambda2 = detail::power_iterate(g, v, shift, p.x.scores, opt, out.iterations2);

  std::vector<double> work(g.n());
  const double tol_scale = opt.tol * std::max(1.0, std::abs(out.lambda1));
  const bool ok1 = detail::residual(g, p.x.scores, p.lambda1, work) <= tol_scale || p.iterations < opt.max_iter;
  const bool ok2 = detail::residual(g, v, out.lambda2, work) <= tol_scale || out.iterations2 < opt.max_iter;
  out.converged = ok1 && ok2;
  if (out.lambda2 > out.lambda1) out.lambda2 = out.lambda1;
  out.degenerate = out.lambda1 - out.lambda2 <= 1e-8;
  out.x = std::move(p.x);
  return out;
}

// ---------------------------------------------------------------------------
// Top-k sets
// ---------------------------------------------------------------------------

struct TopKSet {
  std::size_t k = 0;
  std::vector<NodeId> members;  ///< sorted ascending
  bool tie_broken = false;      ///< the cutoff value is shared by several nodes

  bool contains(NodeId i) const { return std::binary_search(members.begin(), members.end(), i); }
};

/// The k highest-scoring nodes. Nodes tied at the cutoff value fill the
/// remaining slots as a uniformly random subset drawn with `seed`.
inline TopKSet top_k(const ScoreVector& s, std::size_t k, std::uint64_t seed) {
  const std::size_t n = s.size();
  if (k < 1 || k > n)
    throw std::invalid_argument("top_k: k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  std::vector<NodeId> idx(n);
  std::iota(idx.begin(), idx.end(), NodeId{0});
  std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k - 1), idx.end(),
                   [&](NodeId a, NodeId b) { return s.scores[a] > s.scores[b]; });
  const double cutoff = s.scores[idx[k - 1]];

  TopKSet out;
  out.k = k;
  std::vector<NodeId> tied;
  for (NodeId i = 0; i < n; ++i) {
    if (s.scores[i] > cutoff)
      out.members.push_back(i);
    else if (s.scores[i] == cutoff)
      tied.push_back(i);
  }
  const std::size_t need = k - out.members.size();
  out.tie_broken = tied.size() > 1;
  if (tied.size() > need) {
    Rng rng(seed);
    // Partial Fisher-Yates: the first `need` slots become a uniform subset.
    for (std::size_t i = 0; i < need; ++i) {
      const std::size_t j = i + uniform_index(rng, tied.size() - i);
      std::swap(tied[i], tied[j]);
    }
  }
  out.members.insert(out.members.end(), tied.begin(), tied.begin() + static_cast<std::ptrdiff_t>(need));
  std::sort(out.members.begin(), out.members.end());
  return out;
}

inline std::size_t intersection_size(const TopKSet& a, const TopKSet& b) {
  std::size_t c = 0;
  auto i = a.members.begin();
  auto j = b.members.begin();
  while (i != a.members.end() && j != b.members.end()) {
    if (*i < *j)
      ++i;
    else if (*j < *i)
      ++j;
    else {
      ++c;
      ++i;
      ++j;
    }
  }
  return c;
}

/// |a symmetric-difference b|; always even for equal-size sets.
inline std::size_t hamming(const TopKSet& a, const TopKSet& b) {
  if (a.k != b.k || a.members.size() != b.members.size())
    throw std::invalid_argument("hamming: sets of different size");
  return 2 * (a.members.size() - intersection_size(a, b));
}

inline double jaccard(const TopKSet& a, const TopKSet& b) {
  if (a.members.empty() || b.members.empty()) throw std::invalid_argument("jaccard: empty set");
  const auto inter = static_cast<double>(intersection_size(a, b));
  return inter / (static_cast<double>(a.members.size() + b.members.size()) - inter);
}

}  // namespace noisytopk
