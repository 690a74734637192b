#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace bnkit {

/// Project-wide random source: MT19937-64 (as specified by the C++ standard)
/// seeded through SplitMix64. Streams are derived as
/// seed' = splitmix64(seed ^ splitmix64(stream_id)), so every consumer can get
/// an independent, reproducible sequence. Doubles use the top 53 bits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static std::uint64_t splitmix64(std::uint64_t x);
  static Rng stream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform();
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);
  /// Draw proportional to non-negative weights (need not be normalized).
  /// Returns weights.size() when all weights are zero.
  std::size_t categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

}  // namespace bnkit
