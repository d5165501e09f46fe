#include "solvq/statesynth.hpp"

#include <numeric>

#include "solvq/errors.hpp"
#include "solvq/numtheory.hpp"
#include "solvq/orbit_state.hpp"

namespace solvq::statesynth {

unsigned choose_l(std::uint64_t r, double delta) {
  if (r == 0) throw std::invalid_argument("choose_l needs r >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("choose_l needs 0 < delta < 1");
  const double q = 1.0 - static_cast<double>(numtheory::totient(r)) / static_cast<double>(r);
  // Relative slack so that exact powers such as (1/2)^2 = 0.25 count as hits.
  const double target = delta * (1.0 + 1e-12);
  unsigned l = 1;
  for (double x = q; x > target; x *= q) ++l;
  return l;
}

CopyOutcome measure_copy(const GroupOracle& oracle, Encoding g, std::uint64_t r, const qsim::QState& copy,
                         Rng& rng) {
  // The ancilla starts in |0>, so the first QFT_r leaves it uniform over Z_r.
  const auto joint = qsim::OrbitState::prepare(oracle, g, copy, r);
  auto [b, collapsed] = joint.measure_fourier(qsim::Direction::forward, rng);
  return CopyOutcome{b, qsim::drop_register(collapsed, 0)};
}

ConversionResult convert_copies(const GroupOracle& oracle, Encoding g, std::uint64_t r,
                                std::vector<qsim::QState> copies, double delta, Rng& rng) {
  const unsigned l = choose_l(r, delta);
  if (copies.size() < l) {
    throw InsufficientCopies("conversion with r = " + std::to_string(r) + " needs " + std::to_string(l) +
                             " copies, got " + std::to_string(copies.size()));
  }
  ConversionResult result;
  if (r == 1) {
    result.outcomes.assign(copies.size(), 0);
    result.exponents.assign(copies.size(), 0);
    result.states = std::move(copies);
    return result;
  }

  std::vector<qsim::QState> psi;
  psi.reserve(copies.size());
  for (const auto& copy : copies) {
    auto outcome = measure_copy(oracle, g, r, copy, rng);
    result.outcomes.push_back(outcome.b);
    psi.push_back(std::move(outcome.psi));
  }

  std::size_t k = psi.size();
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (std::gcd(result.outcomes[i], r) == 1) {
      k = i;
      break;
    }
  }
  if (k == psi.size()) {
    throw NoCoprimeOutcome("none of " + std::to_string(psi.size()) + " outcomes is coprime to r = " +
                           std::to_string(r));
  }
  result.chosen = k;
  const std::uint64_t bk_inv = *numtheory::inverse_mod(result.outcomes[k], r);

  qsim::QState psi_k = std::move(psi[k]);
  result.exponents.assign(psi.size(), 0);
  const std::size_t first[] = {0};
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (i == k) continue;
    const std::uint64_t c = numtheory::mul_mod(result.outcomes[i], bk_inv, r);
    result.exponents[i] = c;
    qsim::QState joint = qsim::tensor(psi[i], psi_k);
    qsim::element_power_multiply(joint, oracle, 0, 1, static_cast<std::int64_t>(c));
    auto parts = qsim::factorize(joint, first);
    if (!parts) {
      throw FactorizationFailed("corrected pair " + std::to_string(i) + " is entangled with R_k");
    }
    result.states.push_back(std::move(parts->first));
    psi_k = std::move(parts->second);
  }
  result.psi_k = std::move(psi_k);
  return result;
}

qsim::Complex eigenphase_check(const GroupOracle& oracle, const qsim::QState& psi, Encoding g, Encoding h,
                               std::int64_t j) {
  const Encoding x = oracle.multiply(oracle.power(g, j), h);
  qsim::QState moved = psi;
  qsim::left_multiply(moved, oracle, 0, x);
  return qsim::inner_product(psi, moved);
}

}  // namespace solvq::statesynth
