#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace noisytopk {

/// Count / sum / sum-of-squares accumulator; merging is commutative.
struct Accumulator {
  std::size_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++count;
    sum += x;
    sum_sq += x * x;
  }

  void merge(const Accumulator& o) {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }

  double mean() const { return count ? sum / static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN(); }

  /// Unbiased sample variance (0 for fewer than two observations).
  double variance() const {
    if (count < 2) return 0.0;
    const double m = mean();
    return std::max(0.0, (sum_sq - static_cast<double>(count) * m * m) / static_cast<double>(count - 1));
  }

  double std_error() const { return count ? std::sqrt(variance() / static_cast<double>(count)) : 0.0; }
};

/// Two-level (graph, draw) summary of one metric.
///
/// The standard error is computed from the spread of per-graph means, which
/// carries both the between-graph variance and the within-graph variance
/// divided by the number of draws. With a single graph it falls back to the
/// draw-level standard error.
class ClusteredMean {
 public:
  void add_graph(const Accumulator& draws) {
    if (draws.count == 0) return;
    graph_means_.add(draws.mean());
    all_.merge(draws);
  }

  double mean() const { return graph_means_.mean(); }

  double std_error() const {
    if (graph_means_.count >= 2) return graph_means_.std_error();
    return all_.std_error();
  }

  std::size_t graphs() const { return graph_means_.count; }

 private:
  Accumulator graph_means_;
  Accumulator all_;
};

/// Linear-interpolation quantile (type 7) of an unsorted sample.
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile: empty sample");
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

/// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman: need two equal-length samples");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  Accumulator ax, ay;
  for (double v : rx) ax.add(v);
  for (double v : ry) ay.add(v);
  double cov = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) cov += (rx[i] - ax.mean()) * (ry[i] - ay.mean());
  const double sx = std::sqrt(ax.variance() * static_cast<double>(rx.size() - 1));
  const double sy = std::sqrt(ay.variance() * static_cast<double>(ry.size() - 1));
  if (sx == 0.0 || sy == 0.0) return 0.0;
  return cov / (sx * sy);
}

}  // namespace noisytopk
