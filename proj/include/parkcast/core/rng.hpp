#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace parkcast::core {

/// Seeded random stream with hand-rolled distributions.
///
/// std::mt19937_64 output is pinned by the standard, and every distribution
/// here is written out explicitly, so a given seed produces the same draws on
/// any platform. The standard-library distributions are deliberately avoided:
/// their algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [lo, hi] inclusive, via rejection sampling.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Standard normal via Box-Muller.
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Gamma(shape, 1) via Marsaglia-Tsang; shape > 0.
  double gamma(double shape);

  /// Beta(a, b) from two gamma draws.
  double beta(double a, double b);

  /// Binomial(n, p) as n Bernoulli draws; n is small throughout this project.
  int binomial(int n, double p);

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(items[i - 1], items[j]);
    }
  }

  /// Independent child stream derived from this seed and a stream tag.
  static Rng fork(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
};

}  // namespace parkcast::core
