#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "commgrow/distribution.hpp"

namespace commgrow {

/// Reproducible random stream.
///
/// The engine is std::mt19937_64 seeded with the 64-bit seed, whose output
/// sequence is fixed by the C++ standard. All conversions are done here
/// rather than through <random> distributions (whose algorithms differ
/// between standard libraries), so a seed yields the same graph everywhere:
///   - uniform01: top 53 bits of one draw, times 2^-53, in [0, 1)
///   - below(n):  Lemire multiply-shift with rejection, unbiased
/// Independent replications use seed + replication index, one stream each.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t n) {
    std::uint64_t x = engine_();
    auto m = static_cast<unsigned __int128>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = -n % n;
      while (low < threshold) {
        x = engine_();
        m = static_cast<unsigned __int128>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

/// Inverse-CDF sampler over a DegreeDistribution: one uniform01 per draw.
class DegreeSampler {
 public:
  explicit DegreeSampler(const DegreeDistribution& d);
  int operator()(Rng& rng) const;

 private:
  int first_;
  std::vector<double> cumulative_;
};

}  // namespace commgrow
