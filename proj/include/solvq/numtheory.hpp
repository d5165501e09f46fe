#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace solvq::numtheory {

/// (a * b) mod m without overflow.
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);

/// Inverse of a modulo m via extended Euclid, or nullopt when gcd(a, m) != 1.
std::optional<std::uint64_t> inverse_mod(std::uint64_t a, std::uint64_t m);

/// Euler's totient by trial division.
std::uint64_t totient(std::uint64_t r);

/// lcm that throws std::overflow_error instead of wrapping.
std::uint64_t checked_lcm(std::uint64_t a, std::uint64_t b);

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;
  std::uint64_t value;
};

/// Prime-power factorization of x >= 1, primes ascending. Empty for x = 1.
std::vector<PrimePower> prime_powers(std::uint64_t x);

/// ceil(log2(1/epsilon)) for 0 < epsilon < 1.
unsigned log2_inverse_ceil(double epsilon);

}  // namespace solvq::numtheory
