#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace noisytopk {

using NodeId = std::uint32_t;

/// Unordered node pair stored canonically as (u, v) with u < v.
struct Edge {
  NodeId u;
  NodeId v;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph, immutable after construction.
///
/// Stored as compressed sparse rows with sorted neighbor lists; every edge
/// appears in both endpoint rows. Nodes are 0-indexed.
class Graph {
 public:
  Graph() = default;

  /// Empty graph on n nodes.
  explicit Graph(std::size_t n) : n_(n), offsets_(n + 1, 0) {}

  /// Builds from an edge list. Pairs may be given in either orientation.
  /// Throws std::invalid_argument on self-loops, out-of-range endpoints or
  /// duplicate pairs.
  static Graph from_edges(std::size_t n, std::vector<Edge> edges) {
    for (auto& e : edges) {
      if (e.u == e.v) throw std::invalid_argument("self-loop at node " + std::to_string(e.u));
      if (e.u >= n || e.v >= n)
        throw std::invalid_argument("edge endpoint out of range: " + std::to_string(e.u) + " " +
                                    std::to_string(e.v) + " (n=" + std::to_string(n) + ")");
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end())
      throw std::invalid_argument("duplicate edge " + std::to_string(dup->u) + " " + std::to_string(dup->v));
    return from_sorted_unique(n, edges);
  }

  /// Builds from canonical (u < v), lexicographically sorted, duplicate-free
  /// edges. Preconditions are not re-checked.
  static Graph from_sorted_unique(std::size_t n, std::span<const Edge> edges) {
    Graph g(n);
    g.num_edges_ = edges.size();
    for (const auto& e : edges) {
      ++g.offsets_[e.u + 1];
      ++g.offsets_[e.v + 1];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.targets_.resize(2 * edges.size());
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    // Lexicographic order of (u, v) leaves every row sorted: row w first
    // receives its lower neighbors u (as v-entries, increasing in u) and then
    // its upper neighbors v (increasing).
    for (const auto& e : edges) g.targets_[fill[e.v]++] = e.u;
    std::vector<std::size_t> upper_start(fill.begin(), fill.end());
    for (const auto& e : edges) g.targets_[upper_start[e.u]++] = e.v;
    return g;
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return num_edges_; }

  std::span<const NodeId> neighbors(NodeId i) const noexcept {
    return {targets_.data() + offsets_[i], targets_.data() + offsets_[i + 1]};
  }

  std::size_t degree(NodeId i) const noexcept { return offsets_[i + 1] - offsets_[i]; }

  bool has_edge(NodeId i, NodeId j) const noexcept {
    auto nb = neighbors(i);
    return std::binary_search(nb.begin(), nb.end(), j);
  }

  /// Neighbors of i that are greater than i (the upper-triangle row).
  std::span<const NodeId> upper_neighbors(NodeId i) const noexcept {
    auto nb = neighbors(i);
    auto it = std::upper_bound(nb.begin(), nb.end(), i);
    return {it, nb.end()};
  }

  /// Canonical edge list in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges_);
    for (NodeId i = 0; i < n_; ++i)
      for (NodeId j : upper_neighbors(i)) out.push_back({i, j});
    return out;
  }

  /// Sparse product y = A x.
  void multiply(std::span<const double> x, std::span<double> y) const noexcept {
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (std::size_t p = offsets_[i]; p < offsets_[i + 1]; ++p) s += x[targets_[p]];
      y[i] = s;
    }
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.offsets_ == b.offsets_ && a.targets_ == b.targets_;
  }

 private:
  std::size_t n_ = 0;
  std::size_t num_edges_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
};

/// Degrees plus the permutation that sorts them non-increasingly
/// (stable: equal degrees keep ascending node id).
struct DegreeSequence {
  std::vector<std::int64_t> degrees;
  std::vector<NodeId> order;

  std::size_t n() const noexcept { return degrees.size(); }

  /// Degree at 1-based rank r in the sorted order (d_r in d_1 >= d_2 >= ...).
  std::int64_t sorted(std::size_t rank) const { return degrees.at(order.at(rank - 1)); }

  static DegreeSequence from_degrees(std::vector<std::int64_t> d) {
    DegreeSequence s;
    s.degrees = std::move(d);
    s.order.resize(s.degrees.size());
    std::iota(s.order.begin(), s.order.end(), NodeId{0});
    std::stable_sort(s.order.begin(), s.order.end(),
                     [&](NodeId a, NodeId b) { return s.degrees[a] > s.degrees[b]; });
    return s;
  }
};

inline DegreeSequence degrees(const Graph& g) {
  std::vector<std::int64_t> d(g.n());
  for (NodeId i = 0; i < g.n(); ++i) d[i] = static_cast<std::int64_t>(g.degree(i));
  return DegreeSequence::from_degrees(std::move(d));
}

/// Number of connected components (isolated nodes count as components).
inline std::size_t count_components(const Graph& g) {
  std::vector<char> seen(g.n(), 0);
  std::vector<NodeId> stack;
  std::size_t comps = 0;
  for (NodeId s = 0; s < g.n(); ++s) {
    if (seen[s]) continue;
    ++comps;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (NodeId w : g.neighbors(v))
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
  }
  return comps;
}

// ---------------------------------------------------------------------------
// Edge-list text format
//
//   # n=<N>
//   u v        (one edge per line, 0-based, u < v)
//
// Further lines starting with '#' and blank lines are ignored on input.
// ---------------------------------------------------------------------------

inline void write_edge_list(std::ostream& os, const Graph& g) {
  os << "# n=" << g.n() << '\n';
  for (NodeId i = 0; i < g.n(); ++i)
    for (NodeId j : g.upper_neighbors(i)) os << i << ' ' << j << '\n';
}

inline Graph read_edge_list(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  long long n = -1;
  std::vector<Edge> edges;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("edge list line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(is, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      auto pos = line.find("n=");
      if (n < 0 && pos != std::string::npos) {
        try {
          std::size_t used = 0;
          n = std::stoll(line.substr(pos + 2), &used);
        } catch (const std::exception&) {
          fail("malformed header");
        }
        if (n <= 0) fail("node count must be positive");
      }
      continue;
    }
    if (n < 0) fail("missing '# n=<N>' header before first edge");
    std::istringstream ls(line);
    long long u = -1, v = -1;
    std::string extra;
    if (!(ls >> u >> v) || (ls >> extra)) fail("expected two integers 'u v'");
    if (u < 0 || v < 0 || u >= n || v >= n) fail("endpoint out of range");
    if (u >= v) fail("edges must satisfy u < v");
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  if (n < 0) throw std::invalid_argument("edge list: missing '# n=<N>' header");
  return Graph::from_edges(static_cast<std::size_t>(n), std::move(edges));
}

inline void save_edge_list(const std::string& path, const Graph& g) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_edge_list(os, g);
  if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

inline Graph load_edge_list(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
  return read_edge_list(is);
}

}  // namespace noisytopk
