#include "solvq/orderfind.hpp"

#include <stdexcept>

#include "solvq/errors.hpp"
#include "solvq/numtheory.hpp"
#include "solvq/orbit_state.hpp"

namespace solvq::orderfind {

unsigned modulus_exponent(unsigned encoding_length, double epsilon) {
  return 2 * encoding_length + numtheory::log2_inverse_ceil(epsilon) + 2;
}

std::uint64_t choose_modulus(unsigned encoding_length, double epsilon) {
  const unsigned t = modulus_exponent(encoding_length, epsilon);
  if (t > 62) {
    throw SizeLimitExceeded("Fourier modulus 2^" + std::to_string(t) + " exceeds 2^62");
  }
  return std::uint64_t{1} << t;
}

unsigned sample_count(double epsilon) { return numtheory::log2_inverse_ceil(epsilon) + 4; }

std::pair<std::uint64_t, std::uint64_t> continued_fraction(std::uint64_t b, std::uint64_t modulus,
                                                           std::uint64_t bound) {
  if (modulus == 0 || bound == 0) throw std::invalid_argument("continued_fraction needs positive N and bound");
  using u128 = unsigned __int128;
  // Convergents h_i / k_i of b / N.
  u128 h_prev = 0, h = 1, k_prev = 1, k = 0;
  u128 num = b % modulus, den = modulus;
  std::pair<std::uint64_t, std::uint64_t> best{0, 1};
  // The first partial quotient of b/N < 1 is 0, giving 0/1.
  while (den != 0) {
    const u128 a = num / den;
    const u128 h_next = a * h + h_prev;
    const u128 k_next = a * k + k_prev;
    if (k_next > bound) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    best = {static_cast<std::uint64_t>(h), static_cast<std::uint64_t>(k)};
    const u128 rem = num % den;
    num = den;
    den = rem;
  }
  return best;
}

OrderSample order_sample(const GroupOracle& oracle, Encoding g, const qsim::QState& h_state,
                         std::uint64_t modulus, Rng& rng) {
  const auto joint = qsim::OrbitState::prepare(oracle, g, h_state, modulus);
  const auto [b, collapsed] = joint.measure_fourier(qsim::Direction::adjoint, rng);
  (void)collapsed;
  const unsigned n = oracle.encoding_length();
  const std::uint64_t bound = n >= 63 ? UINT64_MAX : (std::uint64_t{1} << n);
  const auto [u, v] = continued_fraction(b, modulus, bound);
  return OrderSample{b, modulus, u, v};
}

RelativeOrderResult relative_order(const GroupOracle& oracle, Encoding g,
                                   std::vector<qsim::QState>& copies, double epsilon, Rng& rng,
                                   const RelativeOrderOptions& options) {
  const unsigned t = sample_count(epsilon);
  if (copies.size() < t) {
    throw InsufficientCopies("relative order needs " + std::to_string(t) + " copies, got " +
                             std::to_string(copies.size()));
  }
  const std::uint64_t modulus = choose_modulus(oracle.encoding_length(), epsilon);
  RelativeOrderResult result;
  for (unsigned i = 0; i < t; ++i) {
    qsim::QState copy = std::move(copies.back());
    copies.pop_back();
    ++result.copies_consumed;
    result.samples.push_back(order_sample(oracle, g, copy, modulus, rng));
    result.r = numtheory::checked_lcm(result.r, result.samples.back().denominator);
  }
  if (options.verify_subgroup != nullptr) {
    const auto& h = *options.verify_subgroup;
    Encoding x = g;
    for (std::uint64_t s = 1; s < result.r; ++s) {
      if (h.contains(x)) {
        throw Unverified("g^" + std::to_string(s) + " already lies in H; computed r = " + std::to_string(result.r));
      }
      x = oracle.multiply(x, g);
    }
    if (!h.contains(x)) throw Unverified("g^" + std::to_string(result.r) + " is not in H");
  }
  return result;
}

}  // namespace solvq::orderfind
