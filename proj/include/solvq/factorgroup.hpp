#pragma once

// Structure of an abelian factor group G/H from copies of |H>: sample
// ker(f)^perp for f(a) = g_1^a_1 ... g_k^a_k H, then read the cyclic
// decomposition off a Smith normal form.

#include <cstdint>
#include <span>
#include <vector>

#include "solvq/blackbox.hpp"
#include "solvq/classical.hpp"
#include "solvq/qsim.hpp"
#include "solvq/rng.hpp"

namespace solvq::factorgroup {

struct KernelPerpSample {
  std::vector<std::uint64_t> b;
  std::uint64_t modulus = 1;
};

/// Uniform A_1..A_k over Z_N with N = lcm(orders), R <- g_1^a_1 ... g_k^a_k R,
/// QFT_N on every A_j, measure all of them. Consumes `h_state`.
KernelPerpSample sample_kernel_perp(const GroupOracle& oracle, std::span<const Encoding> generators,
                                    const qsim::QState& h_state, std::span<const std::uint64_t> orders,
                                    Rng& rng);

/// Cyclic factors of the subgroup of Z_N^k generated by `samples`: the
/// values N / d_i > 1 for the Smith divisors d_i of [samples | N I].
std::vector<std::uint64_t> perp_cyclic_factors(const std::vector<std::vector<std::uint64_t>>& samples,
                                               std::uint64_t modulus, std::size_t width);

/// Each factor split into prime powers, sorted ascending.
std::vector<std::uint64_t> split_prime_powers(std::span<const std::uint64_t> factors);

/// 4k + ceil(log2(1/epsilon)).
unsigned sample_budget(std::size_t generator_count, double epsilon);

struct Options {
  /// Check normality and commutativity of the quotient by enumeration.
  bool verify = false;
  std::size_t max_group_size = classical::kDefaultMaxGroupSize;
};

struct AbelianDecomposition {
  /// q_1 <= q_2 <= ..., each a prime power > 1.
  std::vector<std::uint64_t> prime_powers;
  /// Invariant factors before splitting.
  std::vector<std::uint64_t> cyclic_factors;
  std::vector<std::uint64_t> generator_orders;
  std::uint64_t modulus = 1;
  std::size_t samples = 0;
  std::uint64_t oracle_queries = 0;
  double failure_probability_bound = 0.0;

  std::uint64_t order() const;
};

/// Throws NotSolvable, BudgetExhausted, and with `verify` also NotNormal and
/// NotAbelianQuotient.
AbelianDecomposition quotient_structure(const GroupOracle& oracle, std::span<const Encoding> generators,
                                        std::span<const Encoding> h_generators, double epsilon, Rng& rng,
                                        const Options& options = {});

/// |x>|y> -> |x>|xy> on |gH> (x) |g'H>, giving |gH> (x) |gg'H>.
qsim::QState coset_multiply(const GroupOracle& oracle, const qsim::QState& a, const qsim::QState& b);
/// |x>|y> -> |x>|x^-1 y>, giving |gH> (x) |g^-1 g'H>.
qsim::QState coset_inverse_multiply(const GroupOracle& oracle, const qsim::QState& a, const qsim::QState& b);

}  // namespace solvq::factorgroup
