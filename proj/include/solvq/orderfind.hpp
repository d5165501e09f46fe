#pragma once

// Relative order r_H(g): the least r > 0 with g^r in H, from copies of |H>.

#include <cstdint>
#include <utility>
#include <vector>

#include "solvq/blackbox.hpp"
#include "solvq/classical.hpp"
#include "solvq/qsim.hpp"
#include "solvq/rng.hpp"

namespace solvq::orderfind {

/// t = 2n + ceil(log2(1/epsilon)) + 2.
unsigned modulus_exponent(unsigned encoding_length, double epsilon);
/// N = 2^t. Throws SizeLimitExceeded when t does not fit in 62 bits.
std::uint64_t choose_modulus(unsigned encoding_length, double epsilon);
/// T = ceil(log2(1/epsilon)) + 4 samples per relative order.
unsigned sample_count(double epsilon);

/// Last convergent u/v of b/N with v <= bound. (0, 1) for b = 0.
std::pair<std::uint64_t, std::uint64_t> continued_fraction(std::uint64_t b, std::uint64_t modulus,
                                                           std::uint64_t bound);

struct OrderSample {
  std::uint64_t b = 0;
  std::uint64_t modulus = 1;
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
};

/// One run: uniform control over Z_N, R <- g^a R, adjoint QFT_N on the
/// control, measure. Consumes `h_state`.
OrderSample order_sample(const GroupOracle& oracle, Encoding g, const qsim::QState& h_state,
                         std::uint64_t modulus, Rng& rng);

struct RelativeOrderOptions {
  /// When set, the result is checked against this subgroup by brute force.
  const classical::ElementSet* verify_subgroup = nullptr;
};

struct RelativeOrderResult {
  std::uint64_t r = 1;
  std::vector<OrderSample> samples;
  std::size_t copies_consumed = 0;
};

/// lcm of the denominators of T samples. Takes T states from the back of
/// `copies`; throws InsufficientCopies when fewer are available and
/// Unverified when the optional check fails.
RelativeOrderResult relative_order(const GroupOracle& oracle, Encoding g,
                                   std::vector<qsim::QState>& copies, double epsilon, Rng& rng,
                                   const RelativeOrderOptions& options = {});

}  // namespace solvq::orderfind
