#include "solvq/solvable_order.hpp"

#include <cmath>
#include <string>

#include "solvq/errors.hpp"
#include "solvq/numtheory.hpp"
#include "solvq/orderfind.hpp"
#include "solvq/statesynth.hpp"

namespace solvq::solvable_order {
namespace {

// Largest product of consecutive primes 2 * 3 * 5 * ... not exceeding 2^n.
std::uint64_t largest_primorial(unsigned n) {
  const unsigned __int128 limit = static_cast<unsigned __int128>(1) << std::min(n, 64u);
  std::uint64_t product = 1;
  for (std::uint64_t p = 2;; ++p) {
    bool prime = true;
    for (std::uint64_t d = 2; d * d <= p; ++d) {
      if (p % d == 0) {
        prime = false;
        break;
      }
    }
    if (!prime) continue;
    if (static_cast<unsigned __int128>(product) * p > limit) return product;
    product *= p;
  }
}

std::vector<qsim::QState> fresh_copies(const GroupOracle& oracle, std::size_t count) {
  const Encoding one = oracle.identity();
  return std::vector<qsim::QState>(count, qsim::uniform_state(oracle, std::span(&one, 1)));
}

bool matches(const qsim::QState& state, const qsim::QState& target) {
  return qsim::trace_distance(state, target) <= qsim::kTolerance;
}

}  // namespace

unsigned choose_k(unsigned encoding_length, std::size_t chain_length, double epsilon) {
  if (chain_length == 0) chain_length = 1;
  const double delta = epsilon / (2.0 * static_cast<double>(chain_length));
  const unsigned t = orderfind::sample_count(delta);
  const unsigned l = statesynth::choose_l(largest_primorial(encoding_length), delta);
  return t + l + 1;
}

OrderResult group_order(const GroupOracle& oracle, std::span<const Encoding> generators, double epsilon,
                        Rng& rng, const Options& options) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  OrderResult result;

  const std::uint64_t q0 = oracle.query_count();
  const auto chain = classical::polycyclic_chain(oracle, generators, options.max_group_size);
  const std::uint64_t q1 = oracle.query_count();
  result.classical_queries = q1 - q0;
  result.chain = chain.elements;

  const std::size_t m = chain.length();
  if (m == 0) {
    auto copies = fresh_copies(oracle, 1 + options.extra_copies);
    result.copies_prepared = copies.size();
    result.final_state = copies.back();
    result.surviving_states = std::move(copies);
    return result;
  }

  const unsigned k = choose_k(oracle.encoding_length(), m, epsilon);
  const double delta = epsilon / (2.0 * static_cast<double>(m));
  result.k = k;

  // Expected size of the stage-j input, which a restart has to rebuild.
  auto stage_input_size = [&](std::size_t j) { return k * (m + 1 - j) + options.extra_copies; };

  // Rebuilds `count` copies of |H_j> from fresh |{1}> copies using the
  // relative orders found so far.
  auto replay = [&](std::size_t j, std::size_t count) {
    std::size_t conversions = 0;
    for (std::size_t i = 0; i < j; ++i) conversions += result.factors[i] > 1 ? 1 : 0;
    auto copies = fresh_copies(oracle, count + conversions);
    result.copies_prepared += copies.size();
    for (std::size_t i = 0; i < j; ++i) {
      if (result.factors[i] == 1) continue;
      copies = statesynth::convert_copies(oracle, chain.elements[i], result.factors[i], std::move(copies), delta, rng)
                   .states;
    }
    return copies;
  };

  std::vector<qsim::QState> copies = fresh_copies(oracle, stage_input_size(0));
  result.copies_prepared = copies.size();

  for (std::size_t j = 0; j < m; ++j) {
    const Encoding g = chain.elements[j];
    StageReport stage{g, 1, 0, copies.size(), 0};

    classical::ElementSet below, above;
    if (options.verify) {
      const std::span prefix(chain.elements.data(), j);
      below = classical::as_set(classical::closure(oracle, prefix, options.max_group_size));
      const std::span next(chain.elements.data(), j + 1);
      above = classical::as_set(classical::closure(oracle, next, options.max_group_size));
    }

    double stage_bound = 0.0;
    for (;;) {
      try {
        if (stage.restarts > 0) copies = replay(j, stage_input_size(j));
        std::vector<qsim::QState> working = std::move(copies);

        std::vector<qsim::QState> order_batch(std::make_move_iterator(working.end() - (k - 1)),
                                              std::make_move_iterator(working.end()));
        working.resize(working.size() - (k - 1));
        orderfind::RelativeOrderOptions order_options;
        if (options.verify) order_options.verify_subgroup = &below;
        const auto order = orderfind::relative_order(oracle, g, order_batch, delta, rng, order_options);
        stage.r = order.r;

        if (order.r > 1) {
          const std::size_t batch = working.size();
          auto converted = statesynth::convert_copies(oracle, g, order.r, std::move(working), delta, rng);
          working = std::move(converted.states);
          const double miss = 1.0 - static_cast<double>(numtheory::totient(order.r)) / static_cast<double>(order.r);
          stage_bound = std::pow(miss, static_cast<double>(batch));
        }

        if (options.verify) {
          const auto target = qsim::uniform_state(oracle, std::vector<Encoding>(above.begin(), above.end()));
          for (const auto& state : working) {
            if (!matches(state, target)) throw Unverified("converted state differs from |H_" + std::to_string(j + 1) + ">");
          }
        }
        copies = std::move(working);
        break;
      } catch (const NoCoprimeOutcome&) {
      } catch (const FactorizationFailed&) {
      } catch (const Unverified&) {
      }
      if (stage.restarts >= options.max_stage_restarts) {
        throw BudgetExhausted("stage " + std::to_string(j + 1) + " failed after " +
                              std::to_string(stage.restarts) + " restarts");
      }
      ++stage.restarts;
      ++result.restarts;
    }

    stage.copies_out = copies.size();
    result.failure_probability_bound += delta + stage_bound;
    result.factors.push_back(stage.r);
    result.stages.push_back(stage);
  }

  std::uint64_t order = 1;
  for (std::uint64_t r : result.factors) {
    if (r != 0 && order > UINT64_MAX / r) throw SizeLimitExceeded("group order overflows 64 bits");
    order *= r;
  }
  result.order = order;
  result.oracle_queries = oracle.query_count() - q1;
  result.final_state = copies.back();
  result.surviving_states = std::move(copies);
  return result;
}

}  // namespace solvq::solvable_order
