#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace invtest {

/// SplitMix64 finalizer. Used to expand seeds and derive independent streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives the seed of a child stream from a parent seed and a path of
/// indices, e.g. derive_seed(master, {grid_point, replicate}). Distinct paths
/// give statistically independent xoshiro streams; the mapping depends only on
/// the values, so results do not depend on which thread consumes a stream.
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> path);

/// xoshiro256** seeded through SplitMix64. Satisfies
/// UniformRandomBitGenerator, so it can drive <random> distributions.
///
/// Each Rng is single-owner. Parallel code must never share one; derive a
/// child seed per work item with derive_seed() instead.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  /// Uniform on (0, 1); never returns 0.
  double uniform_open();
  /// Standard normal (Marsaglia polar method).
  double normal();
  /// Exponential with rate 1.
  double exponential();
  /// Gamma(shape, 1) by Marsaglia-Tsang, with the shape < 1 boost.
  double gamma(double shape);
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  bool coin() { return ((*this)() >> 63) != 0; }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace invtest
