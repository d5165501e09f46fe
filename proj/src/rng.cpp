#include "solvq/rng.hpp"

#include <stdexcept>

namespace solvq {
namespace {

std::mt19937_64 seeded(std::uint64_t a, std::uint64_t b, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(tag)};
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : engine_(seeded(seed, 0, 0)) {}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
  Rng rng(0);
  rng.engine_ = seeded(seed, index, 1);
  return rng;
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below needs a positive bound");
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

Rng Rng::split() {
  const std::uint64_t a = engine_(), b = engine_();
  Rng child(0);
  child.engine_ = seeded(a, b, 2);
  return child;
}

}  // namespace solvq
