#include "solvq/reductions.hpp"

#include <stdexcept>

#include "solvq/errors.hpp"
#include "solvq/solvable_order.hpp"

namespace solvq::reductions {
namespace {

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
}

void require_solvable(const GroupOracle& oracle, std::span<const Encoding> gens, const Options& options,
                      const char* what) {
  if (!classical::is_solvable(oracle, gens, options.max_group_size)) {
    throw NotSolvable(std::string(what) + " is not solvable");
  }
}

std::vector<Encoding> join(std::span<const Encoding> a, std::span<const Encoding> b) {
  std::vector<Encoding> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Folds a sub-decision's bookkeeping into `into`.
void absorb(DecisionReport& into, const DecisionReport& part) {
  into.orders.insert(into.orders.end(), part.orders.begin(), part.orders.end());
  into.failure_probability_bound += part.failure_probability_bound;
}

// |<base>| == |<base, extra>| with each order computed at epsilon / 2.
DecisionReport same_order(const GroupOracle& oracle, std::span<const Encoding> base,
                          std::span<const Encoding> extra, double epsilon, Rng& rng, const Options& options) {
  DecisionReport report;
  report.epsilon = epsilon;
  const auto combined = join(base, extra);
  if (!classical::is_solvable(oracle, combined, options.max_group_size)) {
    // A non-solvable group cannot lie inside a solvable one.
    report.answer = false;
    report.decided_classically = true;
    return report;
  }
  solvable_order::Options order_options;
  order_options.max_group_size = options.max_group_size;
  const auto small = solvable_order::group_order(oracle, base, epsilon / 2.0, rng, order_options);
  const auto large = solvable_order::group_order(oracle, combined, epsilon / 2.0, rng, order_options);
  report.orders = {small.order, large.order};
  report.failure_probability_bound = small.failure_probability_bound + large.failure_probability_bound;
  report.answer = small.order == large.order;
  return report;
}

}  // namespace

DecisionReport is_member(const GroupOracle& oracle, std::span<const Encoding> generators, Encoding h,
                         double epsilon, Rng& rng, const Options& options) {
  require_epsilon(epsilon);
  const std::uint64_t q0 = oracle.query_count();
  require_solvable(oracle, generators, options, "<generators>");
  auto report = same_order(oracle, generators, std::span(&h, 1), epsilon, rng, options);
  report.oracle_queries = oracle.query_count() - q0;
  return report;
}

DecisionReport is_subgroup(const GroupOracle& oracle, std::span<const Encoding> h_gens,
                           std::span<const Encoding> g_gens, double epsilon, Rng& rng, const Options& options) {
  require_epsilon(epsilon);
  const std::uint64_t q0 = oracle.query_count();
  require_solvable(oracle, g_gens, options, "G");
  DecisionReport report;
  if (h_gens.empty()) {
    report.answer = true;
    report.epsilon = epsilon;
    report.decided_classically = true;
  } else {
    report = same_order(oracle, g_gens, h_gens, epsilon, rng, options);
  }
  report.oracle_queries = oracle.query_count() - q0;
  return report;
}

DecisionReport groups_equal(const GroupOracle& oracle, std::span<const Encoding> a_gens,
                            std::span<const Encoding> b_gens, double epsilon, Rng& rng, const Options& options) {
  require_epsilon(epsilon);
  const std::uint64_t q0 = oracle.query_count();
  require_solvable(oracle, a_gens, options, "A");
  require_solvable(oracle, b_gens, options, "B");
  DecisionReport report;
  report.epsilon = epsilon;
  const auto forward = is_subgroup(oracle, a_gens, b_gens, epsilon / 2.0, rng, options);
  absorb(report, forward);
  report.answer = forward.answer;
  if (report.answer) {
    const auto backward = is_subgroup(oracle, b_gens, a_gens, epsilon / 2.0, rng, options);
    absorb(report, backward);
    report.answer = backward.answer;
  }
  report.oracle_queries = oracle.query_count() - q0;
  return report;
}

DecisionReport is_normal(const GroupOracle& oracle, std::span<const Encoding> h_gens,
                         std::span<const Encoding> g_gens, double epsilon, Rng& rng, const Options& options) {
  require_epsilon(epsilon);
  const std::uint64_t q0 = oracle.query_count();
  require_solvable(oracle, g_gens, options, "G");
  const double share = epsilon / static_cast<double>(g_gens.size() * h_gens.size() + 1);

  DecisionReport report;
  report.epsilon = epsilon;
  const auto contained = is_subgroup(oracle, h_gens, g_gens, share, rng, options);
  absorb(report, contained);
  if (!contained.answer) throw NotSubgroup("H is not a subgroup of G");

  report.answer = true;
  for (Encoding g : g_gens) {
    const Encoding gi = oracle.inverse(g);
    for (Encoding h : h_gens) {
      const Encoding conjugate = oracle.multiply(oracle.multiply(gi, h), g);
      const auto member = is_member(oracle, h_gens, conjugate, share, rng, options);
      absorb(report, member);
      if (!member.answer) {
        report.answer = false;
        report.oracle_queries = oracle.query_count() - q0;
        return report;
      }
    }
  }
  report.oracle_queries = oracle.query_count() - q0;
  return report;
}

}  // namespace solvq::reductions
