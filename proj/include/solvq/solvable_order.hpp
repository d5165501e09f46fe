#pragma once

// Order of a solvable black-box group and the uniform superposition over it,
// obtained by walking a polycyclic chain {1} = H_0 < H_1 < ... < H_m = G and
// converting copies of |H_{j-1}> into copies of |H_j> stage by stage.

#include <cstdint>
#include <span>
#include <vector>

#include "solvq/blackbox.hpp"
#include "solvq/classical.hpp"
#include "solvq/qsim.hpp"
#include "solvq/rng.hpp"

namespace solvq::solvable_order {

/// k = T(delta) + l_worst(delta) + 1 with delta = epsilon / (2m), where
/// l_worst is choose_l at the largest primorial not above 2^n.
unsigned choose_k(unsigned encoding_length, std::size_t chain_length, double epsilon);

struct Options {
  /// Cross-check every r_j and every converted state against closure
  /// enumeration; mismatches trigger a stage restart.
  bool verify = false;
  /// Additional copies carried to the end, returned in surviving_states.
  std::size_t extra_copies = 0;
  std::size_t max_group_size = classical::kDefaultMaxGroupSize;
  unsigned max_stage_restarts = 3;
};

struct StageReport {
  Encoding element;
  std::uint64_t r = 1;
  unsigned restarts = 0;
  std::size_t copies_in = 0;
  std::size_t copies_out = 0;
};

struct OrderResult {
  std::uint64_t order = 1;
  /// r_1..r_m.
  std::vector<std::uint64_t> factors;
  /// g_1..g_m.
  std::vector<Encoding> chain;
  std::vector<StageReport> stages;
  /// One copy of |G> on the success branch.
  qsim::QState final_state;
  /// Every copy left after the last stage (final_state is the last of them).
  std::vector<qsim::QState> surviving_states;
  /// Sum over stages of the order-finding and conversion error bounds.
  double failure_probability_bound = 0.0;
  /// Oracle calls made by the quantum stages.
  std::uint64_t oracle_queries = 0;
  /// Oracle calls made while building the chain classically.
  std::uint64_t classical_queries = 0;
  unsigned k = 0;
  std::size_t copies_prepared = 0;
  unsigned restarts = 0;
};

/// Throws NotSolvable, SizeLimitExceeded and BudgetExhausted.
OrderResult group_order(const GroupOracle& oracle, std::span<const Encoding> generators, double epsilon,
                        Rng& rng, const Options& options = {});

}  // namespace solvq::solvable_order
