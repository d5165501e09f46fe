#include <gtest/gtest.h>

#include <numeric>

#include "solvq/classical.hpp"
#include "solvq/errors.hpp"
#include "solvq/numtheory.hpp"
#include "solvq/rng.hpp"
#include "support/oracles.hpp"

namespace solvq {
namespace {

using testing::naive_closure;

// Random generating sets drawn from the elements of a group.
std::vector<Encoding> random_subset(const std::vector<Encoding>& pool, std::size_t count, Rng& rng) {
  std::vector<Encoding> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(pool[rng.below(pool.size())]);
  return out;
}

std::vector<Encoding> all_elements(const GroupOracle& g) {
  const auto s = naive_closure(g, g.standard_generators());
  return {s.begin(), s.end()};
}

TEST(Closure, MatchesNaiveClosureOnCorpus) {
  for (const auto& [name, spec] : testing::order_corpus()) {
    const auto g = make_oracle(spec);
    const auto gens = g.standard_generators();
    const auto fast = classical::closure(g, gens);
    const auto slow = naive_closure(g, gens);
    EXPECT_EQ(std::vector<Encoding>(slow.begin(), slow.end()), fast) << name;
  }
}

TEST(Closure, RandomSubgroupsMatchNaiveClosure) {
  Rng rng(11);
  for (const auto& [name, spec] : testing::order_corpus()) {
    const auto g = make_oracle(spec);
    const auto pool = all_elements(g);
    for (int trial = 0; trial < 5; ++trial) {
      const auto gens = random_subset(pool, 1 + rng.below(3), rng);
      const auto slow = naive_closure(g, gens);
      EXPECT_EQ(std::vector<Encoding>(slow.begin(), slow.end()), classical::closure(g, gens)) << name;
    }
  }
}

TEST(Closure, EmptyGeneratorsGiveTrivialGroup) {
  const auto g = make_oracle(GroupSpec::symmetric(4));
  EXPECT_EQ(classical::closure(g, {}), std::vector<Encoding>{g.identity()});
}

TEST(Closure, SizeLimit) {
  const auto g = make_oracle(GroupSpec::symmetric(5));
  EXPECT_THROW(classical::closure(g, g.standard_generators(), 100), SizeLimitExceeded);
  EXPECT_EQ(classical::closure(g, g.standard_generators(), 120).size(), 120u);
}

TEST(Commutator, DefinitionAndAbelianCase) {
  const auto g = make_oracle(GroupSpec::dihedral(5));
  const auto pool = all_elements(g);
  for (Encoding a : pool) {
    for (Encoding b : pool) {
      const Encoding expected =
          g.multiply(g.multiply(g.inverse(a), g.inverse(b)), g.multiply(a, b));
      EXPECT_EQ(classical::commutator(g, a, b), expected);
    }
  }
  const auto z = make_oracle(GroupSpec::cyclic(9));
  for (Encoding a : all_elements(z)) {
    EXPECT_EQ(classical::commutator(z, a, Encoding{4}), z.identity());
  }
}

TEST(DerivedSeries, KnownOrders) {
  const auto s4 = make_oracle(GroupSpec::symmetric(4));
  auto series = classical::derived_series(s4, s4.standard_generators());
  EXPECT_TRUE(series.solvable);
  EXPECT_EQ(series.orders, (std::vector<std::size_t>{24, 12, 4, 1}));

  const auto q8 = make_oracle(GroupSpec::quaternion8());
  series = classical::derived_series(q8, q8.standard_generators());
  EXPECT_TRUE(series.solvable);
  EXPECT_EQ(series.orders, (std::vector<std::size_t>{8, 2, 1}));

  const auto s5 = make_oracle(GroupSpec::symmetric(5));
  series = classical::derived_series(s5, s5.standard_generators());
  EXPECT_FALSE(series.solvable);
  EXPECT_EQ(series.orders.front(), 120u);
  EXPECT_EQ(series.orders.back(), 60u);
  EXPECT_FALSE(classical::is_solvable(s5, s5.standard_generators()));
}

TEST(DerivedSeries, EachLevelIsTheCommutatorSubgroup) {
  // Reference: close the set of all commutators of the previous level.
  const auto g = make_oracle(GroupSpec::symmetric(4));
  const auto series = classical::derived_series(g, g.standard_generators());
  for (std::size_t j = 0; j + 1 < series.levels.size(); ++j) {
    const auto level = naive_closure(g, series.levels[j]);
    std::vector<Encoding> comms;
    for (Encoding a : level) {
      for (Encoding b : level) comms.push_back(classical::commutator(g, a, b));
    }
    EXPECT_EQ(naive_closure(g, series.levels[j + 1]), naive_closure(g, comms)) << "level " << j;
  }
}

// Invariant: every prefix subgroup is normal in the next with cyclic
// quotient, indices multiply to |G|, and no link is redundant.
void check_chain(const GroupOracle& g, const std::vector<Encoding>& gens, const std::string& label) {
  const auto chain = classical::polycyclic_chain(g, gens);
  const auto whole = naive_closure(g, gens);
  std::set<Encoding> prev = {g.identity()};
  std::size_t product = 1;
  for (std::size_t j = 0; j < chain.length(); ++j) {
    const std::vector<Encoding> prefix(chain.elements.begin(), chain.elements.begin() + j + 1);
    const auto cur = naive_closure(g, prefix);
    ASSERT_GT(cur.size(), prev.size()) << label << " redundant link " << j;
    ASSERT_EQ(cur.size() % prev.size(), 0u) << label;
    const std::size_t index = cur.size() / prev.size();
    // Cyclic quotient generated by the new element.
    EXPECT_EQ(testing::naive_relative_order(g, chain.elements[j], prev), index) << label;
    for (Encoding x : cur) {
      for (Encoding h : prev) {
        ASSERT_TRUE(prev.count(g.multiply(g.multiply(x, h), g.inverse(x)))) << label << " not normal at " << j;
      }
    }
    product *= index;
    prev = cur;
  }
  EXPECT_EQ(prev, whole) << label;
  EXPECT_EQ(product, whole.size()) << label;
}

TEST(PolycyclicChain, CorpusGroups) {
  for (const auto& [name, spec] : testing::order_corpus()) {
    const auto g = make_oracle(spec);
    check_chain(g, g.standard_generators(), name);
  }
}

TEST(PolycyclicChain, RandomSubgroups) {
  Rng rng(23);
  for (const auto& [name, spec] : testing::order_corpus()) {
    const auto g = make_oracle(spec);
    const auto pool = all_elements(g);
    for (int trial = 0; trial < 4; ++trial) check_chain(g, random_subset(pool, 1 + rng.below(3), rng), name);
  }
}

TEST(PolycyclicChain, TrivialAndNonSolvable) {
  const auto g = make_oracle(GroupSpec::symmetric(4));
  EXPECT_EQ(classical::polycyclic_chain(g, {}).length(), 0u);
  const std::vector<Encoding> ident = {g.identity()};
  EXPECT_EQ(classical::polycyclic_chain(g, ident).length(), 0u);
  const auto s5 = make_oracle(GroupSpec::symmetric(5));
  EXPECT_THROW(classical::polycyclic_chain(s5, s5.standard_generators()), NotSolvable);
}

TEST(Normalizes, MatchesConjugationCheck) {
  Rng rng(5);
  const auto g = make_oracle(GroupSpec::symmetric(4));
  const auto pool = all_elements(g);
  for (int trial = 0; trial < 40; ++trial) {
    const auto h_gens = random_subset(pool, 1 + rng.below(2), rng);
    const Encoding x = pool[rng.below(pool.size())];
    const auto h = naive_closure(g, h_gens);
    bool expected = true;
    for (Encoding y : h) expected = expected && h.count(g.multiply(g.multiply(x, y), g.inverse(x)));
    EXPECT_EQ(classical::normalizes(g, x, h_gens), expected);
  }
}

TEST(RelativeOrder, MatchesNaiveStepping) {
  Rng rng(7);
  for (const auto& [name, spec] : testing::order_corpus()) {
    const auto g = make_oracle(spec);
    const auto pool = all_elements(g);
    for (int trial = 0; trial < 6; ++trial) {
      const auto h_gens = random_subset(pool, rng.below(2), rng);
      const auto h = naive_closure(g, h_gens);
      const Encoding x = pool[rng.below(pool.size())];
      const std::vector<Encoding> hv(h.begin(), h.end());
      EXPECT_EQ(classical::relative_order(g, x, classical::as_set(hv)), testing::naive_relative_order(g, x, h))
          << name;
      EXPECT_EQ(classical::element_order(g, x), testing::naive_relative_order(g, x, {g.identity()})) << name;
    }
  }
}

TEST(NumberTheory, MulModAgainstWideArithmetic) {
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t m = 1 + (rng.next() >> rng.below(63));
    const std::uint64_t a = rng.next(), b = rng.next();
    const unsigned __int128 wide = static_cast<unsigned __int128>(a % m) * (b % m) % m;
    EXPECT_EQ(numtheory::mul_mod(a % m, b % m, m), static_cast<std::uint64_t>(wide));
  }
}

TEST(NumberTheory, InverseMod) {
  for (std::uint64_t m = 1; m < 60; ++m) {
    for (std::uint64_t a = 0; a < m; ++a) {
      const auto inv = numtheory::inverse_mod(a, m);
      if (std::gcd(a, m) == 1) {
        ASSERT_TRUE(inv.has_value());
        EXPECT_EQ(a * *inv % m, 1 % m);
        EXPECT_LT(*inv, m);
      } else {
        EXPECT_FALSE(inv.has_value());
      }
    }
  }
}

TEST(NumberTheory, TotientByCounting) {
  for (std::uint64_t r = 1; r < 300; ++r) {
    std::uint64_t count = 0;
    for (std::uint64_t a = 1; a <= r; ++a) count += std::gcd(a, r) == 1;
    EXPECT_EQ(numtheory::totient(r), count) << r;
  }
}

TEST(NumberTheory, PrimePowersMultiplyBack) {
  EXPECT_TRUE(numtheory::prime_powers(1).empty());
  for (std::uint64_t x = 2; x < 2000; ++x) {
    std::uint64_t product = 1, last = 1;
    for (const auto& pp : numtheory::prime_powers(x)) {
      EXPECT_GT(pp.prime, last);
      last = pp.prime;
      std::uint64_t v = 1;
      for (unsigned e = 0; e < pp.exponent; ++e) v *= pp.prime;
      EXPECT_EQ(v, pp.value);
      product *= pp.value;
    }
    EXPECT_EQ(product, x);
  }
}

TEST(NumberTheory, CheckedLcm) {
  EXPECT_EQ(numtheory::checked_lcm(4, 6), 12u);
  EXPECT_EQ(numtheory::checked_lcm(1, 7), 7u);
  EXPECT_THROW(numtheory::checked_lcm(std::uint64_t{1} << 40, (std::uint64_t{1} << 40) - 1), std::overflow_error);
}

TEST(NumberTheory, Log2InverseCeil) {
  EXPECT_EQ(numtheory::log2_inverse_ceil(0.5), 1u);
  EXPECT_EQ(numtheory::log2_inverse_ceil(0.25), 2u);
  EXPECT_EQ(numtheory::log2_inverse_ceil(0.3), 2u);
  EXPECT_EQ(numtheory::log2_inverse_ceil(0.1), 4u);
  EXPECT_EQ(numtheory::log2_inverse_ceil(0.05), 5u);
  EXPECT_EQ(numtheory::log2_inverse_ceil(1.0 / 1024), 10u);
}

TEST(RngStreams, ReproducibleAndDistinct) {
  Rng a(99), b(99);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next(), b.next());
  Rng s1 = Rng::stream(1, 0), s2 = Rng::stream(1, 1);
  EXPECT_NE(s1.next(), s2.next());
  Rng u(4);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
    EXPECT_LT(u.below(7), 7u);
  }
}

}  // namespace
}  // namespace solvq
