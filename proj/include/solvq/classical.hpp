#pragma once

// Classical scaffolding around the quantum pipeline: exact closure
// enumeration (the brute-force ground truth), commutators, derived series,
// solvability and polycyclic chain construction.

#include <cstddef>
#include <span>
#include <unordered_set>
#include <vector>

#include "solvq/blackbox.hpp"

namespace solvq::classical {

inline constexpr std::size_t kDefaultMaxGroupSize = 10000;

using ElementSet = std::unordered_set<Encoding, EncodingHash>;

/// All elements of <generators>, sorted by encoding. Throws SizeLimitExceeded
/// once more than `max_size` elements have been found.
std::vector<Encoding> closure(const GroupOracle& oracle, std::span<const Encoding> generators,
                              std::size_t max_size = kDefaultMaxGroupSize);

/// [g, h] = g^-1 h^-1 g h.
Encoding commutator(const GroupOracle& oracle, Encoding g, Encoding h);

struct DerivedSeries {
  /// levels[0] is the input generating set; levels[j+1] generates the
  /// commutator subgroup of <levels[j]>. Ends with an empty set (the trivial
  /// group) when solvable, or with the first level whose group repeats.
  std::vector<std::vector<Encoding>> levels;
  std::vector<std::size_t> orders;
  bool solvable = false;
};

DerivedSeries derived_series(const GroupOracle& oracle, std::span<const Encoding> generators,
                             std::size_t max_size = kDefaultMaxGroupSize);

bool is_solvable(const GroupOracle& oracle, std::span<const Encoding> generators,
                 std::size_t max_size = kDefaultMaxGroupSize);

/// g_1..g_m with H_j = <g_1..g_j> and {1} = H_0 < H_1 < ... < H_m = G, each
/// H_{j-1} normal in H_j with cyclic quotient. Redundant links are dropped.
struct PolycyclicChain {
  std::vector<Encoding> elements;

  std::size_t length() const { return elements.size(); }
};

/// Relabels the derived series deepest level first. Throws NotSolvable.
PolycyclicChain polycyclic_chain(const GroupOracle& oracle, std::span<const Encoding> generators,
                                 std::size_t max_size = kDefaultMaxGroupSize);

/// True iff g H g^-1 = H for H = <subgroup_generators>.
bool normalizes(const GroupOracle& oracle, Encoding g, std::span<const Encoding> subgroup_generators,
                std::size_t max_size = kDefaultMaxGroupSize);

/// Smallest r > 0 with g^r in `subgroup` (brute force).
std::uint64_t relative_order(const GroupOracle& oracle, Encoding g, const ElementSet& subgroup);

/// Order of g by brute force.
std::uint64_t element_order(const GroupOracle& oracle, Encoding g);

ElementSet as_set(std::span<const Encoding> elements);

}  // namespace solvq::classical
