#pragma once

#include <cstdint>
#include <random>

namespace solvq {

/// Seedable Mersenne Twister with a fixed, portable double conversion so that
/// runs are bit-reproducible for a given (seed, stream).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream for trial `index` under a global seed.
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Child stream derived from this one; advances this generator.
  Rng split();

 private:
  std::mt19937_64 engine_;
};

}  // namespace solvq
