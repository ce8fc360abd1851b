#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "noisytopk/graph.hpp"
#include "noisytopk/rng.hpp"

namespace noisytopk {

/// Edge-flip observation noise: an absent pair is observed as an edge with
/// probability alpha, a present edge is dropped with probability beta,
/// independently over unordered pairs.
struct NoiseParams {
  double alpha = 0.0;
  double beta = 0.0;

  void validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("noise: alpha must lie in [0, 1]");
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("noise: beta must lie in [0, 1]");
  }

  friend bool operator==(const NoiseParams&, const NoiseParams&) = default;
};

namespace detail {

// Walks the observation process, reporting kept edges through `on_keep(u, v)`
// and spurious additions through `on_add(u, v)`, each in lexicographic order.
//
// Two independent streams are derived from `seed`: one for the absent pairs
// (addition, rate alpha) and one for the present edges (deletion, rate beta).
// Each stream walks its pairs lexicographically and uses geometric skipping.
template <typename Keep, typename Add>
void walk_noise(const Graph& a, const NoiseParams& params, std::uint64_t seed, Keep&& on_keep, Add&& on_add) {
  params.validate();
  const std::size_t n = a.n();

  Rng del_rng(derive_seed(seed, {stream::noise_del}));
  SegmentedSkipper del(params.beta, del_rng);
  for (NodeId i = 0; i < n; ++i) {
    auto up = a.upper_neighbors(i);
    std::size_t next_keep = 0;
    del.segment(up.size(), [&](std::uint64_t off) {
      for (; next_keep < off; ++next_keep) on_keep(i, up[next_keep]);
      next_keep = off + 1;
    });
    for (; next_keep < up.size(); ++next_keep) on_keep(i, up[next_keep]);
  }

  Rng add_rng(derive_seed(seed, {stream::noise_add}));
  SegmentedSkipper add(params.alpha, add_rng);
  for (NodeId i = 0; i < n; ++i) {
    auto up = a.upper_neighbors(i);
    const std::size_t absent = (n - 1 - i) - up.size();
    // Map the off-th absent position of row i to its column j by advancing
    // through the (sorted) upper neighbors; offsets arrive increasing.
    std::size_t nb = 0;
    add.segment(absent, [&](std::uint64_t off) {
      std::size_t j = i + 1 + off + nb;
      while (nb < up.size() && up[nb] <= j) {
        ++nb;
        ++j;
      }
      on_add(i, static_cast<NodeId>(j));
    });
  }
}

}  // namespace detail

/// Draws one noisy observation Y of `a`.
inline Graph apply_noise(const Graph& a, const NoiseParams& params, std::uint64_t seed) {
  std::vector<Edge> kept, added;
  kept.reserve(a.num_edges());
  detail::walk_noise(
      a, params, seed, [&](NodeId u, NodeId v) { kept.push_back({u, v}); },
      [&](NodeId u, NodeId v) { added.push_back({u, v}); });
  std::vector<Edge> all(kept.size() + added.size());
  std::merge(kept.begin(), kept.end(), added.begin(), added.end(), all.begin());
  return Graph::from_sorted_unique(a.n(), all);
}

/// Degrees of apply_noise(a, params, seed) without materialising Y.
inline std::vector<std::int64_t> noisy_degrees(const Graph& a, const NoiseParams& params, std::uint64_t seed) {
  std::vector<std::int64_t> d(a.n(), 0);
  auto bump = [&](NodeId u, NodeId v) {
    ++d[u];
    ++d[v];
  };
  detail::walk_noise(a, params, seed, bump, bump);
  return d;
}

/// One outcome of the exact observation distribution.
struct NoiseOutcome {
  Graph graph;
  double probability;
};

inline constexpr std::size_t kMaxEnumeratedPairs = 20;

/// Exhaustive enumeration of all 2^C(n,2) observations with their exact
/// probabilities. Only for tiny graphs (C(n,2) <= 20).
inline std::vector<NoiseOutcome> exact_noise_distribution(const Graph& a, const NoiseParams& params) {
  params.validate();
  const std::size_t n = a.n();
  const std::size_t pairs = n * (n - 1) / 2;
  if (pairs > kMaxEnumeratedPairs)
    throw std::invalid_argument("exact_noise_distribution: " + std::to_string(pairs) +
                                " pairs exceed the enumeration cap of " + std::to_string(kMaxEnumeratedPairs));
  std::vector<Edge> all_pairs;
  std::vector<double> p_on;  // P(Y_ij = 1)
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) {
      all_pairs.push_back({i, j});
      p_on.push_back(a.has_edge(i, j) ? 1.0 - params.beta : params.alpha);
    }
  std::vector<NoiseOutcome> out;
  out.reserve(std::size_t{1} << pairs);
  std::vector<Edge> edges;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) {
    edges.clear();
    double prob = 1.0;
    for (std::size_t b = 0; b < pairs; ++b) {
      if (mask >> b & 1U) {
        prob *= p_on[b];
        edges.push_back(all_pairs[b]);
      } else {
        prob *= 1.0 - p_on[b];
      }
    }
    out.push_back({Graph::from_sorted_unique(n, edges), prob});
  }
  return out;
}

}  // namespace noisytopk
