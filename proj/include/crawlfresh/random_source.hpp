#pragma once

#include <cstdint>
#include <random>

namespace crawlfresh {

/// Seeded random source with deterministic substream derivation.
///
/// Sampling is pinned down to the raw mt19937_64 output (explicit bit
/// transforms, no std::*_distribution), so a given seed produces the same
/// stream on every platform. Substreams derived from (seed, index) are
/// statistically independent, which is what replication- and page-indexed
/// parallelism relies on.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  /// Independent child source derived from this source's seed and `index`.
  /// Derivation uses the stored seed, not generator state, so the call is
  /// repeatable regardless of how much has been drawn.
  RandomSource stream(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform();

  double uniform(double lo, double hi);

  /// Exponential with the given rate (mean 1/rate), by inverse CDF.
  double exponential(double rate);

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

/// splitmix64-style mix of (seed, index) into a child seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace crawlfresh
