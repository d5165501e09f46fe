#include "solvq/numtheory.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace solvq::numtheory {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::optional<std::uint64_t> inverse_mod(std::uint64_t a, std::uint64_t m) {
  if (m == 0) return std::nullopt;
  if (m == 1) return 0;
  std::int64_t old_r = static_cast<std::int64_t>(a % m), r = static_cast<std::int64_t>(m);
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_s -= q * s;
    std::swap(old_s, s);
  }
  if (old_r != 1) return std::nullopt;
  const auto mm = static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(((old_s % mm) + mm) % mm);
}

std::uint64_t totient(std::uint64_t r) {
  std::uint64_t result = r;
  for (std::uint64_t p = 2; p * p <= r; ++p) {
    if (r % p != 0) continue;
    while (r % p == 0) r /= p;
    result -= result / p;
  }
  if (r > 1) result -= result / r;
  return result;
}

std::uint64_t checked_lcm(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  const std::uint64_t g = std::gcd(a, b);
  const unsigned __int128 l = static_cast<unsigned __int128>(a / g) * b;
  if (l > UINT64_MAX) throw std::overflow_error("lcm overflows 64 bits");
  return static_cast<std::uint64_t>(l);
}

std::vector<PrimePower> prime_powers(std::uint64_t x) {
  std::vector<PrimePower> out;
  for (std::uint64_t p = 2; p * p <= x; ++p) {
    if (x % p != 0) continue;
    PrimePower pp{p, 0, 1};
    while (x % p == 0) {
      x /= p;
      ++pp.exponent;
      pp.value *= p;
    }
    out.push_back(pp);
  }
  if (x > 1) out.push_back({x, 1, x});
  return out;
}

unsigned log2_inverse_ceil(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  // Nudge so that exact powers of two (0.25 -> 2) do not round up.
  const double v = std::log2(1.0 / epsilon);
  return static_cast<unsigned>(std::ceil(v - 1e-12));
}

}  // namespace solvq::numtheory
