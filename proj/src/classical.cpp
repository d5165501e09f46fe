#include "solvq/classical.hpp"

#include <algorithm>

#include "solvq/errors.hpp"

namespace solvq::classical {

ElementSet as_set(std::span<const Encoding> elements) {
  return ElementSet(elements.begin(), elements.end());
}

std::vector<Encoding> closure(const GroupOracle& oracle, std::span<const Encoding> generators,
                              std::size_t max_size) {
  for (Encoding g : generators) {
    if (!oracle.is_valid(g)) {
      // Route through the oracle so the rejection is counted like any other.
      oracle.inverse(g);
    }
  }
  std::vector<Encoding> elements{oracle.identity()};
  ElementSet seen{oracle.identity()};
  for (std::size_t idx = 0; idx < elements.size(); ++idx) {
    for (Encoding s : generators) {
      const Encoding y = oracle.multiply(elements[idx], s);
      if (seen.insert(y).second) {
        elements.push_back(y);
        if (elements.size() > max_size) {
          throw SizeLimitExceeded("closure exceeds " + std::to_string(max_size) + " elements");
        }
      }
    }
  }
  std::sort(elements.begin(), elements.end());
  return elements;
}

Encoding commutator(const GroupOracle& oracle, Encoding g, Encoding h) {
  const Encoding gi = oracle.inverse(g);
  const Encoding hi = oracle.inverse(h);
  return oracle.multiply(oracle.multiply(gi, hi), oracle.multiply(g, h));
}

namespace {

// Irredundant generators of the commutator subgroup of <elements>, taken from
// the commutators of all element pairs in enumeration order.
std::vector<Encoding> commutator_generators(const GroupOracle& oracle,
                                            const std::vector<Encoding>& elements,
                                            std::size_t max_size) {
  std::vector<Encoding> gens;
  ElementSet span{oracle.identity()};
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t j = i + 1; j < elements.size(); ++j) {
      // [y, x] = [x, y]^-1, so unordered pairs generate the same subgroup.
      const Encoding c = commutator(oracle, elements[i], elements[j]);
      if (span.contains(c)) continue;
      gens.push_back(c);
      span = as_set(closure(oracle, gens, max_size));
    }
  }
  return gens;
}

}  // namespace

DerivedSeries derived_series(const GroupOracle& oracle, std::span<const Encoding> generators,
                             std::size_t max_size) {
  DerivedSeries series;
  std::vector<Encoding> level(generators.begin(), generators.end());
  auto elements = closure(oracle, level, max_size);
  series.levels.push_back(level);
  series.orders.push_back(elements.size());

  while (elements.size() > 1) {
    auto next = commutator_generators(oracle, elements, max_size);
    auto next_elements = closure(oracle, next, max_size);
    series.levels.push_back(next);
    series.orders.push_back(next_elements.size());
    if (next_elements.size() == elements.size()) {
      // Perfect group reached: G^(j+1) = G^(j) != {1}.
      series.solvable = false;
      return series;
    }
    elements = std::move(next_elements);
  }
  series.solvable = true;
  return series;
}

bool is_solvable(const GroupOracle& oracle, std::span<const Encoding> generators,
                 std::size_t max_size) {
  return derived_series(oracle, generators, max_size).solvable;
}

PolycyclicChain polycyclic_chain(const GroupOracle& oracle, std::span<const Encoding> generators,
                                 std::size_t max_size) {
  const auto series = derived_series(oracle, generators, max_size);
  if (!series.solvable) {
    throw NotSolvable("group " + oracle.describe() + " restricted to the given generators is not solvable");
  }
  PolycyclicChain chain;
  ElementSet current{oracle.identity()};
  for (std::size_t level = series.levels.size(); level-- > 0;) {
    for (Encoding g : series.levels[level]) {
      if (current.contains(g)) continue;
      chain.elements.push_back(g);
      current = as_set(closure(oracle, chain.elements, max_size));
    }
  }
  return chain;
}

bool normalizes(const GroupOracle& oracle, Encoding g, std::span<const Encoding> subgroup_generators,
                std::size_t max_size) {
  const auto elements = closure(oracle, subgroup_generators, max_size);
  const auto members = as_set(elements);
  const Encoding gi = oracle.inverse(g);
  for (Encoding h : elements) {
    if (!members.contains(oracle.multiply(oracle.multiply(g, h), gi))) return false;
  }
  return true;
}

std::uint64_t relative_order(const GroupOracle& oracle, Encoding g, const ElementSet& subgroup) {
  Encoding x = g;
  std::uint64_t r = 1;
  while (!subgroup.contains(x)) {
    x = oracle.multiply(x, g);
    ++r;
  }
  return r;
}

std::uint64_t element_order(const GroupOracle& oracle, Encoding g) {
  return relative_order(oracle, g, ElementSet{oracle.identity()});
}

}  // namespace solvq::classical
