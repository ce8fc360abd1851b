#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace noisytopk {

// All stochastic routines draw from std::mt19937_64 (its output sequence is
// fixed by the standard) and convert raw words to doubles/indices with the
// helpers below instead of <random> distributions, whose algorithms are
// implementation-defined.
using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives a child seed from a root and an ordered list of indices:
///   h_0 = mix64(root), h_{i+1} = mix64(h_i ^ mix64(index_i + i + 1)).
/// Distinct index tuples give statistically independent streams.
inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = mix64(root);
  std::uint64_t pos = 0;
  for (auto v : path) {
    ++pos;
    h = mix64(h ^ mix64(v + pos));
  }
  return h;
}

/// Stream tags used with derive_seed so that graph generation, noise and
/// tie-breaking never share a generator.
namespace stream {
inline constexpr std::uint64_t graph = 0x67726170ULL;
inline constexpr std::uint64_t noise = 0x6e6f6973ULL;
inline constexpr std::uint64_t ties = 0x74696573ULL;
inline constexpr std::uint64_t noise_add = 1;
inline constexpr std::uint64_t noise_del = 2;
}  // namespace stream

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform double in (0, 1].
inline double uniform_open0(Rng& rng) { return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53; }

/// Uniform integer in [0, bound), bound > 0 (Lemire's multiply-shift with rejection).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Bernoulli(p) draw consuming exactly one word.
inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

/// Enumerates the successes of `count` independent Bernoulli(p) trials by
/// geometric skipping, calling `on_success(index)` in increasing index order.
/// Cost is proportional to the number of successes, not to `count`.
class GeometricSkipper {
 public:
  GeometricSkipper(double p, Rng& rng) : p_(p), rng_(&rng) {
    if (p_ > 0.0 && p_ < 1.0) log_q_ = std::log1p(-p_);
  }

  /// Number of failures before the next success; max() when p == 0.
  std::uint64_t next_gap() {
    if (p_ <= 0.0) return std::numeric_limits<std::uint64_t>::max();
    if (p_ >= 1.0) return 0;
    const double g = std::floor(std::log(uniform_open0(*rng_)) / log_q_);
    if (!(g < 9.0e18)) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(g);
  }

 private:
  double p_;
  double log_q_ = 0.0;
  Rng* rng_;
};

/// Running skip counter over a sequence of trials laid out in consecutive
/// segments (e.g. matrix rows); the remaining gap carries over segment borders.
class SegmentedSkipper {
 public:
  SegmentedSkipper(double p, Rng& rng) : gen_(p, rng), gap_(gen_.next_gap()) {}

  /// Visits successes within a segment of `len` trials; `on_success(offset)`.
  template <typename F>
  void segment(std::uint64_t len, F&& on_success) {
    std::uint64_t pos = 0;
    while (gap_ < len - pos) {
      pos += gap_;
      on_success(pos);
      ++pos;
      gap_ = gen_.next_gap();
      if (pos >= len) return;
    }
    gap_ -= (len - pos);
  }

 private:
  GeometricSkipper gen_;
  std::uint64_t gap_;
};

}  // namespace noisytopk
