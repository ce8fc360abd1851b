#pragma once

#include <cstdint>
#include <vector>

#include "noisytopk/noisytopk.hpp"

namespace testing_support {

using namespace noisytopk;

inline Graph star(std::size_t leaves) {
  std::vector<Edge> e;
  for (NodeId i = 1; i <= leaves; ++i) e.push_back({0, i});
  return Graph::from_edges(leaves + 1, e);
}

inline Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Graph::from_edges(n, e);
}

inline Graph complete(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) e.push_back({i, j});
  return Graph::from_edges(n, e);
}

// Rotates through ER, PA and SW with small random parameters.
inline Graph random_graph(std::uint64_t seed, std::size_t n_min, std::size_t n_max) {
  Rng rng(seed);
  const std::size_t n = n_min + uniform_index(rng, n_max - n_min + 1);
  switch (n < 3 ? 0 : seed % 3) {
    case 0: return generate_er(n, 0.05 + 0.5 * uniform01(rng), seed);
    case 1: {
      const std::size_t m = 1 + uniform_index(rng, std::min<std::size_t>(4, n - 1));
      return generate_pa({n, m, uniform01(rng) * 3.0 - 0.5}, seed);
    }
    default: {
      std::size_t k_ring = 2 * (1 + uniform_index(rng, std::max<std::size_t>(1, (n - 1) / 4)));
      if (k_ring >= n) k_ring = 2;
      return generate_small_world(n, k_ring, 0.3 * uniform01(rng), seed);
    }
  }
}

inline bool graph_invariants_hold(const Graph& g) {
  std::size_t stubs = 0;
  for (NodeId i = 0; i < g.n(); ++i) {
    auto nb = g.neighbors(i);
    for (std::size_t p = 0; p < nb.size(); ++p) {
      if (nb[p] == i || nb[p] >= g.n()) return false;
      if (p > 0 && nb[p - 1] >= nb[p]) return false;
      if (!g.has_edge(nb[p], i)) return false;
    }
    stubs += nb.size();
  }
  return stubs == 2 * g.num_edges();
}

}  // namespace testing_support
