#include "solvq/factorgroup.hpp"

#include <algorithm>

#include "solvq/errors.hpp"
#include "solvq/numtheory.hpp"
#include "solvq/orderfind.hpp"
#include "solvq/smith.hpp"
#include "solvq/solvable_order.hpp"

namespace solvq::factorgroup {
namespace {

constexpr std::uint64_t kMaxJointEntries = std::uint64_t{1} << 24;

void require_coset_pair(const qsim::QState& a, const qsim::QState& b) {
  for (const auto* s : {&a, &b}) {
    if (s->width() != 1 || s->layout()[0].kind != qsim::RegisterKind::group) {
      throw LayoutMismatch("coset states must consist of one group register");
    }
  }
  if (!a.layout()[0].same_domain(b.layout()[0])) throw LayoutMismatch("coset states use different encodings");
}

qsim::QState coset_apply(const GroupOracle& oracle, const qsim::QState& a, const qsim::QState& b,
                         std::int64_t c) {
  require_coset_pair(a, b);
  qsim::QState joint = qsim::tensor(a, b);
  qsim::element_power_multiply(joint, oracle, 0, 1, c);
  return joint;
}

}  // namespace

KernelPerpSample sample_kernel_perp(const GroupOracle& oracle, std::span<const Encoding> generators,
                                    const qsim::QState& h_state, std::span<const std::uint64_t> orders,
                                    Rng& rng) {
  if (orders.size() != generators.size()) throw DomainMismatch("one order per generator is required");
  const std::size_t k = generators.size();
  KernelPerpSample sample;
  for (std::uint64_t r : orders) sample.modulus = numtheory::checked_lcm(sample.modulus, r);
  const std::uint64_t n = sample.modulus;

  std::uint64_t entries = h_state.size();
  for (std::size_t j = 0; j < k; ++j) {
    if (entries > kMaxJointEntries / n) {
      throw SizeLimitExceeded("joint state over Z_" + std::to_string(n) + "^" + std::to_string(k) + " is too large");
    }
    entries *= n;
  }

  // A_1..A_k uniform over Z_N, then R.
  std::vector<std::uint64_t> values(n);
  for (std::uint64_t a = 0; a < n; ++a) values[a] = a;
  qsim::QState state = qsim::uniform_state(qsim::Register::modular("A1", n), values);
  for (std::size_t j = 1; j < k; ++j) {
    state = qsim::tensor(state, qsim::uniform_state(qsim::Register::modular("A" + std::to_string(j + 1), n), values));
  }
  state = k == 0 ? h_state : qsim::tensor(state, h_state);

  // g_1^a_1 ... g_k^a_k x: the innermost factor g_k acts first.
  for (std::size_t j = k; j-- > 0;) {
    qsim::controlled_left_multiply(state, oracle, j, k, generators[j]);
  }
  // Transforming and measuring one register at a time gives the same joint
  // distribution as transforming all of them before measuring.
  for (std::size_t j = 0; j < k; ++j) {
    qsim::apply_qft(state, j, qsim::Direction::forward);
    sample.b.push_back(qsim::measure(state, j, rng));
  }
  return sample;
}

std::vector<std::uint64_t> perp_cyclic_factors(const std::vector<std::vector<std::uint64_t>>& samples,
                                               std::uint64_t modulus, std::size_t width) {
  if (width == 0) return {};
  // Columns: the samples, then N e_1 .. N e_k.
  smith::IntMatrix b(width, std::vector<smith::Integer>(samples.size() + width, 0));
  for (std::size_t c = 0; c < samples.size(); ++c) {
    if (samples[c].size() != width) throw DomainMismatch("sample has the wrong length");
    for (std::size_t i = 0; i < width; ++i) b[i][c] = samples[c][i] % modulus;
  }
  for (std::size_t i = 0; i < width; ++i) b[i][samples.size() + i] = modulus;

  const auto snf = smith::smith_normal_form(b);
  std::vector<std::uint64_t> factors;
  for (const auto& d : snf.divisors) {
    const std::uint64_t q = modulus / static_cast<std::uint64_t>(d);
    if (q > 1) factors.push_back(q);
  }
  std::sort(factors.begin(), factors.end());
  return factors;
}

std::vector<std::uint64_t> split_prime_powers(std::span<const std::uint64_t> factors) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t f : factors) {
    for (const auto& pp : numtheory::prime_powers(f)) out.push_back(pp.value);
  }
  std::sort(out.begin(), out.end());
  return out;
}

unsigned sample_budget(std::size_t generator_count, double epsilon) {
  return static_cast<unsigned>(4 * generator_count) + numtheory::log2_inverse_ceil(epsilon);
}

std::uint64_t AbelianDecomposition::order() const {
  std::uint64_t product = 1;
  for (std::uint64_t q : prime_powers) product *= q;
  return product;
}

AbelianDecomposition quotient_structure(const GroupOracle& oracle, std::span<const Encoding> generators,
                                        std::span<const Encoding> h_generators, double epsilon, Rng& rng,
                                        const Options& options) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  const std::uint64_t q0 = oracle.query_count();
  const std::size_t k = generators.size();
  if (!classical::is_solvable(oracle, generators, options.max_group_size)) {
    throw NotSolvable("G = <generators> is not solvable");
  }

  if (options.verify) {
    const auto g_set = classical::as_set(classical::closure(oracle, generators, options.max_group_size));
    const auto h_elements = classical::closure(oracle, h_generators, options.max_group_size);
    const auto h_set = classical::as_set(h_elements);
    for (Encoding h : h_elements) {
      if (!g_set.contains(h)) throw NotNormal("H is not contained in G");
    }
    for (Encoding g : generators) {
      if (!classical::normalizes(oracle, g, h_generators, options.max_group_size)) {
        throw NotNormal("generator " + oracle.hex(g) + " does not normalize H");
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        if (!h_set.contains(classical::commutator(oracle, generators[i], generators[j]))) {
          throw NotAbelianQuotient("generators " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                   " do not commute modulo H");
        }
      }
    }
  }

  AbelianDecomposition result;
  result.samples = sample_budget(k, epsilon);
  if (k == 0) return result;

  // The error budget is split evenly between preparing |H>, the generator
  // orders and the sampling.
  const double third = epsilon / 3.0;
  solvable_order::Options h_options;
  h_options.extra_copies = result.samples;
  h_options.max_group_size = options.max_group_size;
  auto h_result = solvable_order::group_order(oracle, h_generators, third, rng, h_options);
  auto& h_copies = h_result.surviving_states;

  const double per_order = third / static_cast<double>(k);
  const Encoding one = oracle.identity();
  const auto trivial = qsim::uniform_state(oracle, std::span(&one, 1));
  for (Encoding g : generators) {
    std::vector<qsim::QState> copies(orderfind::sample_count(per_order), trivial);
    result.generator_orders.push_back(orderfind::relative_order(oracle, g, copies, per_order, rng).r);
    result.modulus = numtheory::checked_lcm(result.modulus, result.generator_orders.back());
  }

  std::vector<std::vector<std::uint64_t>> samples;
  for (std::size_t s = 0; s < result.samples; ++s) {
    qsim::QState copy = std::move(h_copies.back());
    h_copies.pop_back();
    samples.push_back(sample_kernel_perp(oracle, generators, copy, result.generator_orders, rng).b);
  }
  result.cyclic_factors = perp_cyclic_factors(samples, result.modulus, k);
  result.prime_powers = split_prime_powers(result.cyclic_factors);
  result.failure_probability_bound = h_result.failure_probability_bound + 2.0 * third;
  result.oracle_queries = oracle.query_count() - q0;
  return result;
}

qsim::QState coset_multiply(const GroupOracle& oracle, const qsim::QState& a, const qsim::QState& b) {
  return coset_apply(oracle, a, b, 1);
}

qsim::QState coset_inverse_multiply(const GroupOracle& oracle, const qsim::QState& a, const qsim::QState& b) {
  return coset_apply(oracle, a, b, -1);
}

}  // namespace solvq::factorgroup
