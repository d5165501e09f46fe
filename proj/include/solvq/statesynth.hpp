#pragma once

// Conversion of l copies of |H> into l-1 copies of |<g>H>, given r = r_H(g)
// and g normalizing H.

#include <cstdint>
#include <vector>

#include "solvq/blackbox.hpp"
#include "solvq/qsim.hpp"
#include "solvq/rng.hpp"

namespace solvq::statesynth {

/// Smallest l with (1 - phi(r)/r)^l <= delta; 1 for r = 1.
unsigned choose_l(std::uint64_t r, double delta);

/// psi_b = r^{-1/2} sum_a e_r(a b) g^a |phi>, the state left in R after the
/// ancilla of one copy is observed as b. Exposed for tests and diagnostics.
struct CopyOutcome {
  std::uint64_t b = 0;
  qsim::QState psi;
};

/// QFT_r on a fresh ancilla, R <- g^a R, QFT_r again, measure the ancilla.
CopyOutcome measure_copy(const GroupOracle& oracle, Encoding g, std::uint64_t r, const qsim::QState& copy,
                         Rng& rng);

struct ConversionResult {
  /// l - 1 copies of |<g>H> (all l copies when r = 1).
  std::vector<qsim::QState> states;
  std::vector<std::uint64_t> outcomes;
  /// Index k of the copy whose outcome is coprime to r.
  std::size_t chosen = 0;
  /// c_i = b_i b_k^{-1} mod r, with c_k = 0.
  std::vector<std::uint64_t> exponents;
  /// The discarded register R_k, an eigenvector of every M_{g^j h}.
  qsim::QState psi_k;
};

/// Throws InsufficientCopies when |copies| < choose_l(r, delta),
/// NoCoprimeOutcome when no b_i is a unit mod r, and FactorizationFailed when
/// a corrected pair is not a product state (g does not normalize H, or r is
/// wrong).
ConversionResult convert_copies(const GroupOracle& oracle, Encoding g, std::uint64_t r,
                                std::vector<qsim::QState> copies, double delta, Rng& rng);

/// <psi| M_{g^j h} |psi>, where M_x is left multiplication by x.
qsim::Complex eigenphase_check(const GroupOracle& oracle, const qsim::QState& psi, Encoding g, Encoding h,
                               std::int64_t j);

}  // namespace solvq::statesynth
