#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "noisytopk/graph.hpp"
#include "noisytopk/rng.hpp"

namespace noisytopk {

/// Erdos-Renyi G(n, p): every pair (i < j) is present independently with
/// probability p. Pairs are visited in lexicographic order.
inline Graph generate_er(std::size_t n, double p, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("generate_er: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("generate_er: p must lie in [0, 1]");
  Rng rng(seed);
  SegmentedSkipper skip(p, rng);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(p * static_cast<double>(n) * static_cast<double>(n - 1) / 2.0 * 1.05) + 16);
  for (NodeId i = 0; i + 1 < n; ++i) {
    skip.segment(n - 1 - i, [&](std::uint64_t off) { edges.push_back({i, static_cast<NodeId>(i + 1 + off)}); });
  }
  return Graph::from_sorted_unique(n, edges);
}

/// Linear preferential attachment parameters: attachment weight deg(v) + b.
struct PaParams {
  std::size_t n = 0;
  std::size_t m = 1;
  double b = 0.0;

  void validate() const {
    if (!(b > -1.0)) throw std::invalid_argument("PA: offset b must be > -1");
    if (m < 1) throw std::invalid_argument("PA: m must be >= 1");
    if (n <= m) throw std::invalid_argument("PA: n must exceed m");
  }
};

namespace detail {

// Fenwick tree over non-negative weights with prefix-sum search.
class WeightTree {
 public:
  explicit WeightTree(std::size_t capacity) : tree_(capacity + 1, 0.0) {
    while ((std::size_t{1} << (log_ + 1)) <= capacity) ++log_;
  }

  void add(std::size_t i, double delta) {
    total_ += delta;
    for (std::size_t p = i + 1; p < tree_.size(); p += p & (~p + 1)) tree_[p] += delta;
  }

  double total() const noexcept { return total_; }

  // Smallest index whose inclusive prefix sum exceeds target.
  std::size_t find(double target) const {
    std::size_t pos = 0;
    for (std::size_t step = std::size_t{1} << log_; step > 0; step >>= 1) {
      std::size_t next = pos + step;
      if (next < tree_.size() && tree_[next] <= target) {
        pos = next;
        target -= tree_[next];
      }
    }
    return pos;
  }

 private:
  std::vector<double> tree_;
  double total_ = 0.0;
  std::size_t log_ = 0;
};

}  // namespace detail

/// Linear preferential attachment.
///
/// Starts from a complete graph on m+1 nodes. Each arriving node t picks m
/// distinct existing targets sequentially without replacement, with
/// probability proportional to deg(v) + b where degrees are frozen at the
/// start of step t.
inline Graph generate_pa(const PaParams& params, std::uint64_t seed) {
  params.validate();
  const std::size_t n = params.n, m = params.m;
  Rng rng(seed);
  std::vector<std::size_t> deg(n, 0);
  std::vector<Edge> edges;
  edges.reserve(m * (m + 1) / 2 + (n - m - 1) * m);
  for (NodeId i = 0; i <= m; ++i)
    for (NodeId j = i + 1; j <= m; ++j) edges.push_back({i, j});
  for (std::size_t i = 0; i <= m; ++i) deg[i] = m;

  detail::WeightTree weights(n);
  for (std::size_t i = 0; i <= m; ++i) weights.add(i, static_cast<double>(deg[i]) + params.b);

  std::vector<NodeId> picked;
  std::vector<double> picked_w;
  picked.reserve(m);
  picked_w.reserve(m);
  for (std::size_t t = m + 1; t < n; ++t) {
    picked.clear();
    picked_w.clear();
    for (std::size_t r = 0; r < m; ++r) {
      double target = uniform01(rng) * weights.total();
      std::size_t v = weights.find(target);
      if (v >= t) v = t - 1;
      // Rounding can land on a removed (zero-weight) slot; step to a live one.
      while (std::find(picked.begin(), picked.end(), v) != picked.end()) v = (v + 1) % t;
      const double w = static_cast<double>(deg[v]) + params.b;
      picked.push_back(static_cast<NodeId>(v));
      picked_w.push_back(w);
      weights.add(v, -w);
    }
    for (std::size_t r = 0; r < m; ++r) {
      const NodeId v = picked[r];
      ++deg[v];
      weights.add(v, picked_w[r] + 1.0);
      edges.push_back({v, static_cast<NodeId>(t)});
    }
    deg[t] = m;
    weights.add(t, static_cast<double>(m) + params.b);
  }
  std::sort(edges.begin(), edges.end());
  return Graph::from_sorted_unique(n, edges);
}

/// Watts-Strogatz small world: ring lattice with k_ring/2 neighbors on each
/// side, then every lattice edge (i, i+j) (visited j-major, i-minor) has its
/// far endpoint rewired with probability rewire_p to a uniformly chosen node
/// that is neither i nor already adjacent to i. Edge count is preserved.
inline Graph generate_small_world(std::size_t n, std::size_t k_ring, double rewire_p, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("generate_small_world: n must be >= 1");
  if (k_ring == 0 || k_ring % 2 != 0) throw std::invalid_argument("generate_small_world: k_ring must be even and positive");
  if (k_ring >= n) throw std::invalid_argument("generate_small_world: k_ring must be < n");
  if (!(rewire_p >= 0.0 && rewire_p <= 1.0)) throw std::invalid_argument("generate_small_world: rewire_p must lie in [0, 1]");

  Rng rng(seed);
  std::vector<std::vector<NodeId>> adj(n);
  auto insert = [&](NodeId a, NodeId b) {
    auto& ra = adj[a];
    ra.insert(std::lower_bound(ra.begin(), ra.end(), b), b);
    auto& rb = adj[b];
    rb.insert(std::lower_bound(rb.begin(), rb.end(), a), a);
  };
  auto erase = [&](NodeId a, NodeId b) {
    auto& ra = adj[a];
    ra.erase(std::lower_bound(ra.begin(), ra.end(), b));
    auto& rb = adj[b];
    rb.erase(std::lower_bound(rb.begin(), rb.end(), a));
  };
  auto adjacent = [&](NodeId a, NodeId b) { return std::binary_search(adj[a].begin(), adj[a].end(), b); };

  const std::size_t half = k_ring / 2;
  for (std::size_t j = 1; j <= half; ++j)
    for (std::size_t i = 0; i < n; ++i) insert(static_cast<NodeId>(i), static_cast<NodeId>((i + j) % n));

  for (std::size_t j = 1; j <= half; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto u = static_cast<NodeId>(i);
      const auto v = static_cast<NodeId>((i + j) % n);
      if (!bernoulli(rng, rewire_p)) continue;
      if (!adjacent(u, v)) continue;  // lattice edge already rewired away
      if (adj[u].size() >= n - 1) continue;
      NodeId w;
      do {
        w = static_cast<NodeId>(uniform_index(rng, n));
      } while (w == u || adjacent(u, w));
      erase(u, v);
      insert(u, w);
    }
  }

  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j : adj[i])
      if (j > i) edges.push_back({i, j});
  return Graph::from_sorted_unique(n, edges);
}

}  // namespace noisytopk
