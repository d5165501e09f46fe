#pragma once

// Decision problems reduced to order computation: membership, containment,
// equality and normality of subgroups given by generators.

#include <cstdint>
#include <span>
#include <vector>

#include "solvq/blackbox.hpp"
#include "solvq/classical.hpp"
#include "solvq/rng.hpp"

namespace solvq::reductions {

struct DecisionReport {
  bool answer = false;
  /// Every group order computed along the way, in call order.
  std::vector<std::uint64_t> orders;
  double epsilon = 0.0;
  /// Sum of the sub-call bounds; never above epsilon.
  double failure_probability_bound = 0.0;
  std::uint64_t oracle_queries = 0;
  /// Set when the answer was decided without any order computation.
  bool decided_classically = false;
};

struct Options {
  std::size_t max_group_size = classical::kDefaultMaxGroupSize;
};

/// h in <generators>: compares |<generators>| and |<generators, h>|. Answers
/// false at once when <generators, h> is not solvable. Throws NotSolvable
/// for a non-solvable base group.
DecisionReport is_member(const GroupOracle& oracle, std::span<const Encoding> generators, Encoding h,
                         double epsilon, Rng& rng, const Options& options = {});

/// <h_gens> <= <g_gens>.
DecisionReport is_subgroup(const GroupOracle& oracle, std::span<const Encoding> h_gens,
                           std::span<const Encoding> g_gens, double epsilon, Rng& rng,
                           const Options& options = {});

/// <a_gens> = <b_gens>: containment both ways at epsilon / 2 each.
DecisionReport groups_equal(const GroupOracle& oracle, std::span<const Encoding> a_gens,
                            std::span<const Encoding> b_gens, double epsilon, Rng& rng,
                            const Options& options = {});

/// <h_gens> normal in <g_gens>, via membership of every g_i^-1 h_j g_i.
/// Throws NotSubgroup when <h_gens> is not contained in <g_gens>.
DecisionReport is_normal(const GroupOracle& oracle, std::span<const Encoding> h_gens,
                         std::span<const Encoding> g_gens, double epsilon, Rng& rng,
                         const Options& options = {});

}  // namespace solvq::reductions
