#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "solvq/classical.hpp"
#include "solvq/errors.hpp"
#include "solvq/orbit_state.hpp"
#include "solvq/qsim.hpp"
#include "support/oracles.hpp"

namespace solvq::qsim {
namespace {

using solvq::testing::root_of_unity;

QState random_modular_state(std::uint64_t n, Rng& rng, std::size_t entries) {
  StateBuilder b({Register::modular("A", n)});
  for (std::size_t i = 0; i < entries; ++i) {
    const std::uint64_t label[1] = {rng.below(n)};
    b.add(label, Complex(rng.uniform() - 0.5, rng.uniform() - 0.5));
  }
  return b.build(true);
}

std::vector<double> marginal(const QState& s, std::size_t reg, std::uint64_t n) {
  std::vector<double> out(n, 0.0);
  for (const auto& [v, p] : outcome_distribution(s, reg)) out[v] = p;
  return out;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  double tv = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] - b[i]);
  return tv / 2.0;
}

TEST(UnitRoot, QuarterTurnsAreExact) {
  EXPECT_EQ(unit_root(0, 8), Complex(1.0, 0.0));
  EXPECT_EQ(unit_root(2, 8), Complex(0.0, 1.0));
  EXPECT_EQ(unit_root(4, 8), Complex(-1.0, 0.0));
  EXPECT_EQ(unit_root(-2, 8), Complex(0.0, -1.0));
  EXPECT_EQ(unit_root(12, 8), Complex(-1.0, 0.0));
  EXPECT_NEAR(std::abs(unit_root(1, 7) - root_of_unity(1, 7)), 0.0, 1e-15);
}

TEST(Qft, MatchesDirectDftOnRandomStates) {
  Rng rng(1);
  for (std::uint64_t n : {1u, 2u, 3u, 5u, 8u, 12u, 17u}) {
    const QState s = random_modular_state(n, rng, 2 * n);
    QState t = s;
    apply_qft(t, 0, Direction::forward);
    for (std::uint64_t b = 0; b < n; ++b) {
      Complex expected = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        expected += s.amplitude(i) * root_of_unity(static_cast<std::int64_t>(s.label(i)[0] * b % n), n);
      }
      expected /= std::sqrt(static_cast<double>(n));
      const std::uint64_t label[1] = {b};
      EXPECT_NEAR(std::abs(t.amplitude_of(label) - expected), 0.0, 1e-12) << n << " " << b;
    }
  }
}

TEST(Qft, AdjointUndoesForwardAndPreservesNorm) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const std::uint64_t n = 2 + rng.below(40);
    const QState s = random_modular_state(n, rng, 1 + rng.below(n));
    QState t = s;
    apply_qft(t, 0, Direction::forward);
    EXPECT_NEAR(t.norm_squared(), 1.0, 1e-12);
    apply_qft(t, 0, Direction::adjoint);
    EXPECT_LT(trace_distance(s, t), 1e-9);
    EXPECT_NEAR(std::abs(inner_product(s, t) - Complex(1.0, 0.0)), 0.0, 1e-9);
  }
}

TEST(Qft, ActsOnOneRegisterOfAProduct) {
  Rng rng(3);
  const QState a = random_modular_state(6, rng, 4);
  const QState b = random_modular_state(5, rng, 3);
  QState joint = tensor(a, b);
  apply_qft(joint, 1, Direction::adjoint);
  QState b2 = b;
  apply_qft(b2, 0, Direction::adjoint);
  EXPECT_LT(trace_distance(joint, tensor(a, b2)), 1e-9);
}

TEST(Qft, RejectsGroupRegisterAndHugeModulus) {
  const auto g = make_oracle(GroupSpec::cyclic(4));
  const std::vector<Encoding> el = {g.identity()};
  QState s = uniform_state(g, el);
  EXPECT_THROW(apply_qft(s, 0), DomainMismatch);
  const std::uint64_t zero[1] = {0};
  QState big = basis_state({Register::modular("A", std::uint64_t{1} << 30)}, zero);
  EXPECT_THROW(apply_qft(big, 0), SizeLimitExceeded);
}

TEST(GeometricSum, MatchesDirectSummation) {
  Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint64_t n = 1 + rng.below(500);
    const std::uint64_t len = rng.below(2 * n + 3);
    const std::uint64_t u = rng.below(n);
    Complex direct = 0.0;
    for (std::uint64_t j = 0; j < len; ++j) direct += root_of_unity(static_cast<std::int64_t>(j * u % n), n);
    EXPECT_NEAR(std::abs(geometric_sum(len, u, n) - direct), 0.0, 1e-9) << len << " " << u << " " << n;
  }
  // Huge modulus, small angle: L terms of nearly 1.
  const std::uint64_t big = std::uint64_t{1} << 50;
  EXPECT_NEAR(std::abs(geometric_sum(1000, 1, big)), 1000.0, 1e-6);
  EXPECT_NEAR(std::abs(geometric_sum(big, 0, big)), static_cast<double>(big), 1.0);
}

struct OrbitCase {
  GroupSpec spec;
  std::size_t generator;
  std::vector<std::size_t> subgroup;
  std::uint64_t modulus;
};

std::vector<OrbitCase> orbit_cases() {
  return {
      {GroupSpec::cyclic(6), 0, {}, 16},
      {GroupSpec::cyclic(5), 0, {}, 32},
      {GroupSpec::dihedral(4), 0, {1}, 32},
      {GroupSpec::symmetric(4), 1, {0}, 64},
      {GroupSpec::quaternion8(), 0, {1}, 12},
      {GroupSpec::unitriangular(3, 3), 0, {1}, 27},
  };
}

TEST(OrbitStateTest, FourierDistributionMatchesIndependentOracles) {
  for (const auto& c : orbit_cases()) {
    const auto g = make_oracle(c.spec);
    const auto gens = g.standard_generators();
    std::vector<Encoding> h_gens;
    for (std::size_t i : c.subgroup) h_gens.push_back(gens[i]);
    const auto h = solvq::testing::naive_closure(g, h_gens);
    const std::vector<Encoding> hv(h.begin(), h.end());
    const QState phi = uniform_state(g, hv);
    const Encoding x = gens[c.generator];
    const auto orbit = OrbitState::prepare(g, x, phi, c.modulus);
    EXPECT_EQ(orbit.period(), solvq::testing::naive_relative_order(g, x, h));

    const auto closed = orbit.fourier_distribution(Direction::adjoint);
    const auto direct = solvq::testing::direct_order_distribution(g, x, h, c.modulus);
    QState dense = orbit.materialize();
    EXPECT_NEAR(dense.norm_squared(), 1.0, 1e-12);
    apply_qft(dense, 0, Direction::adjoint);
    const auto simulated = marginal(dense, 0, c.modulus);
    EXPECT_LT(total_variation(closed, direct), 1e-9) << c.modulus;
    EXPECT_LT(total_variation(closed, simulated), 1e-9) << c.modulus;
    for (std::uint64_t b = 0; b < c.modulus; ++b) {
      EXPECT_NEAR(orbit.fourier_probability(b, Direction::adjoint), closed[b], 1e-12);
    }
  }
}

TEST(OrbitStateTest, MaterializeMatchesControlledMultiplication) {
  const auto g = make_oracle(GroupSpec::symmetric(4));
  const auto gens = g.standard_generators();
  const std::vector<Encoding> hv = {g.identity(), gens[0]};
  const QState phi = uniform_state(g, hv);
  const std::uint64_t n = 10;
  std::vector<std::uint64_t> values(n);
  for (std::uint64_t a = 0; a < n; ++a) values[a] = a;
  QState joint = tensor(uniform_state(Register::modular("A", n), values), phi);
  controlled_left_multiply(joint, g, 0, 1, gens[1]);
  EXPECT_LT(trace_distance(joint, OrbitState::prepare(g, gens[1], phi, n).materialize()), 1e-9);
}

TEST(OrbitStateTest, OverlappingOrbitUsesGeneralState) {
  // phi is not invariant under any coset, so orbit positions overlap.
  const auto g = make_oracle(GroupSpec::cyclic(4));
  StateBuilder b({Register::group("R", g.encoding_length())});
  const std::uint64_t l0[1] = {0}, l1[1] = {1};
  b.add(l0, Complex(0.8, 0.0));
  b.add(l1, Complex(0.0, 0.6));
  const QState phi = b.build();
  for (auto dir : {Direction::forward, Direction::adjoint}) {
    const auto orbit = OrbitState::prepare(g, Encoding{1}, phi, 16);
    QState dense = orbit.materialize();
    apply_qft(dense, 0, dir);
    EXPECT_LT(total_variation(orbit.fourier_distribution(dir), marginal(dense, 0, 16)), 1e-9);
  }
}

TEST(OrbitStateTest, CollapsedStateMatchesPostselection) {
  const auto g = make_oracle(GroupSpec::dihedral(6));
  const auto gens = g.standard_generators();
  const std::vector<Encoding> hv = {g.identity(), gens[1]};
  const QState phi = uniform_state(g, hv);
  const auto orbit = OrbitState::prepare(g, gens[0], phi, 24);
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    for (auto dir : {Direction::forward, Direction::adjoint}) {
      auto [b, collapsed] = orbit.measure_fourier(dir, rng);
      QState dense = orbit.materialize();
      apply_qft(dense, 0, dir);
      postselect(dense, 0, b);
      EXPECT_LT(trace_distance(collapsed, dense), 1e-9);
    }
  }
}

// Chi-square of sampled outcomes against exact probabilities, with the bins
// given as lists of outcomes plus one remainder bin.
double sampling_p_value(const OrbitState& orbit, Direction dir, const std::vector<std::vector<std::uint64_t>>& bins,
                        int samples, Rng& rng) {
  std::vector<double> expected;
  std::map<std::uint64_t, std::size_t> bin_of;
  double covered = 0.0;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    double p = 0.0;
    for (std::uint64_t b : bins[i]) {
      p += orbit.fourier_probability(b, dir);
      bin_of[b] = i;
    }
    expected.push_back(p);
    covered += p;
  }
  expected.push_back(std::max(0.0, 1.0 - covered));
  std::vector<double> counts(expected.size(), 0.0);
  for (int i = 0; i < samples; ++i) {
    const std::uint64_t b = orbit.measure_fourier(dir, rng).first;
    const auto it = bin_of.find(b);
    counts[it == bin_of.end() ? bins.size() : it->second] += 1.0;
  }
  double stat = 0.0;
  int dof = -1;
  double pooled_e = 0.0, pooled_c = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double e = expected[i] * samples;
    if (e < 5.0) {
      pooled_e += e;
      pooled_c += counts[i];
      continue;
    }
    stat += (counts[i] - e) * (counts[i] - e) / e;
    ++dof;
  }
  if (pooled_e > 0.0) {
    if (pooled_e >= 5.0) {
      stat += (pooled_c - pooled_e) * (pooled_c - pooled_e) / pooled_e;
      ++dof;
    } else {
      EXPECT_LE(pooled_c, 5.0 + 3.0 * pooled_e);
    }
  }
  return solvq::testing::chi_square_p_value(stat, std::max(dof, 1));
}

TEST(OrbitStateTest, TableSamplerMatchesExactDistribution) {
  const auto g = make_oracle(GroupSpec::cyclic(12));
  const QState phi = uniform_state(g, std::vector<Encoding>{g.identity()});
  Rng rng(31);
  for (std::uint64_t x : {1u, 2u, 5u, 9u}) {
    const auto orbit = OrbitState::prepare(g, Encoding{x}, phi, 128);
    std::vector<std::vector<std::uint64_t>> bins;
    for (std::uint64_t b = 0; b < 128; ++b) bins.push_back({b});
    EXPECT_GT(sampling_p_value(orbit, Direction::adjoint, bins, 4000, rng), 1e-4) << x;
  }
}

TEST(OrbitStateTest, RejectionSamplerMatchesExactDistribution) {
  // M = N / gcd(p, N) above the table threshold.
  const std::uint64_t n = std::uint64_t{1} << 24;
  Rng rng(37);
  for (std::uint64_t q : {3u, 6u, 7u}) {
    const auto g = make_oracle(GroupSpec::cyclic(q));
    const QState phi = uniform_state(g, std::vector<Encoding>{g.identity()});
    const auto orbit = OrbitState::prepare(g, Encoding{1}, phi, n);
    std::vector<std::vector<std::uint64_t>> bins;
    for (std::uint64_t j = 0; j < q; ++j) {
      const std::uint64_t centre = (j * n + q / 2) / q;
      for (int w = -6; w <= 6; ++w) bins.push_back({(centre + n + static_cast<std::uint64_t>(w)) % n});
    }
    EXPECT_GT(sampling_p_value(orbit, Direction::adjoint, bins, 3000, rng), 1e-4) << q;
  }
}

TEST(Factorize, ProductStatesSplitAndEntangledOnesDoNot) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const QState a = random_modular_state(5, rng, 3);
    const QState b = random_modular_state(7, rng, 4);
    const QState joint = tensor(a, b);
    const std::size_t first[1] = {0};
    const auto split = factorize(joint, first);
    ASSERT_TRUE(split.has_value());
    EXPECT_NEAR(fidelity(split->first, a), 1.0, 1e-9);
    EXPECT_NEAR(fidelity(split->second, b), 1.0, 1e-9);
    EXPECT_LT(trace_distance(tensor(split->first, split->second), joint), 1e-9);
    EXPECT_TRUE(factor_check(joint, first));
  }
  StateBuilder bell({Register::modular("A", 2), Register::modular("B", 2)});
  const std::uint64_t l00[2] = {0, 0}, l11[2] = {1, 1};
  bell.add(l00, 1.0);
  bell.add(l11, 1.0);
  const QState s = bell.build(true);
  const std::size_t first[1] = {0};
  EXPECT_FALSE(factorize(s, first).has_value());
  EXPECT_FALSE(factor_check(s, first));
}

TEST(Factorize, NearlyProductStateRespectsTolerance) {
  StateBuilder b({Register::modular("A", 2), Register::modular("B", 2)});
  const std::uint64_t l00[2] = {0, 0}, l01[2] = {0, 1}, l10[2] = {1, 0}, l11[2] = {1, 1};
  b.add(l00, 0.5);
  b.add(l01, 0.5);
  b.add(l10, 0.5);
  b.add(l11, 0.5 + 1e-6);
  const QState s = b.build(true);
  const std::size_t first[1] = {0};
  EXPECT_FALSE(factor_check(s, first));
}

TEST(GroupRegisters, ControlledAndPowerMultiplication) {
  const auto g = make_oracle(GroupSpec::symmetric(3));
  const auto gens = g.standard_generators();
  const std::uint64_t label[2] = {2, gens[0].bits};
  QState s = basis_state({Register::modular("A", 3), Register::group("R", g.encoding_length())}, label);
  controlled_left_multiply(s, g, 0, 1, gens[1]);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.label(0)[1], g.multiply(g.power(gens[1], 2), gens[0]).bits);

  const std::uint64_t pair[2] = {gens[1].bits, gens[0].bits};
  const Register r = Register::group("R", g.encoding_length());
  for (std::int64_t c : {-2, -1, 0, 1, 4}) {
    QState t = basis_state({r, r}, pair);
    element_power_multiply(t, g, 0, 1, c);
    EXPECT_EQ(t.label(0)[1], g.multiply(g.power(gens[1], c), gens[0]).bits) << c;
    EXPECT_EQ(t.label(0)[0], gens[1].bits);
  }
  QState u = basis_state({r}, std::span(pair, 1));
  left_multiply(u, g, 0, gens[0]);
  EXPECT_EQ(u.label(0)[0], g.multiply(gens[0], gens[1]).bits);
}

TEST(GroupRegisters, UniformStateRejectsInvalidElements) {
  const auto g = make_oracle(GroupSpec::cyclic(5));
  EXPECT_THROW(uniform_state(g, std::vector<Encoding>{Encoding{6}}), InvalidEncoding);
  EXPECT_THROW(uniform_state(g, std::vector<Encoding>{}), EmptySet);
}

TEST(Measurement, OutcomeFrequencies) {
  const std::uint64_t v0[1] = {0}, v3[1] = {3};
  StateBuilder b({Register::modular("A", 4)});
  b.add(v0, std::sqrt(0.2));
  b.add(v3, Complex(0.0, std::sqrt(0.8)));
  const QState s = b.build();
  Rng rng(12);
  int threes = 0;
  for (int i = 0; i < 5000; ++i) {
    QState t = s;
    const auto v = measure(t, 0, rng);
    ASSERT_TRUE(v == 0 || v == 3);
    threes += v == 3;
    EXPECT_EQ(t.size(), 1u);
  }
  // 0.8 +- 5 sigma with sigma = sqrt(0.16 / 5000).
  EXPECT_NEAR(threes / 5000.0, 0.8, 5 * std::sqrt(0.16 / 5000));
  QState t = s;
  EXPECT_THROW(postselect(t, 0, 1), DomainMismatch);
}

TEST(Layout, PermuteDropAndMismatch) {
  Rng rng(8);
  const QState a = random_modular_state(3, rng, 3);
  const QState b = random_modular_state(4, rng, 2);
  const std::size_t swap[2] = {1, 0};
  EXPECT_LT(trace_distance(permute_registers(tensor(a, b), swap), tensor(b, a)), 1e-12);
  const std::uint64_t one[1] = {1};
  const QState fixed = basis_state({Register::modular("C", 5)}, one);
  EXPECT_LT(trace_distance(drop_register(tensor(a, fixed), 1), a), 1e-12);
  EXPECT_THROW(inner_product(a, b), LayoutMismatch);
}

TEST(Distance, PhaseInvariantAndConsistentWithFidelity) {
  Rng rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const QState a = random_modular_state(9, rng, 5);
    const QState b = random_modular_state(9, rng, 5);
    StateBuilder rotated(a.layout());
    const Complex phase = unit_root(static_cast<std::int64_t>(rng.below(1000)), 1000);
    for (std::size_t i = 0; i < a.size(); ++i) rotated.add(a.label(i), a.amplitude(i) * phase);
    EXPECT_LT(trace_distance(a, rotated.build()), 1e-12);
    EXPECT_NEAR(trace_distance(a, b), std::sqrt(1.0 - fidelity(a, b)), 1e-7);
  }
  const std::uint64_t zero[1] = {0}, one[1] = {1};
  const QState e0 = basis_state({Register::modular("A", 2)}, zero);
  const QState e1 = basis_state({Register::modular("A", 2)}, one);
  EXPECT_NEAR(trace_distance(e0, e1), 1.0, 1e-15);
}

TEST(Dump, FormatAndCanonicalPhase) {
  const auto g = make_oracle(GroupSpec::symmetric(3));
  StateBuilder b({Register::modular("A", 4), Register::group("R", g.encoding_length())});
  const std::uint64_t l1[2] = {1, 3}, l2[2] = {2, 5};
  b.add(l1, Complex(0.0, 0.6));
  b.add(l2, Complex(-0.8, 0.0));
  const QState s = b.build();
  EXPECT_EQ(dump_string(s), "1 3 0.000000000000 0.600000000000\n2 5 -0.800000000000 0.000000000000\n");
  EXPECT_EQ(dump_string(s, true), "1 3 0.600000000000 0.000000000000\n2 5 0.000000000000 0.800000000000\n");
}

}  // namespace
}  // namespace solvq::qsim
