#pragma once

// Sparse pure-state simulator over registers that hold either group-element
// encodings or integers modulo N.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "solvq/blackbox.hpp"
#include "solvq/rng.hpp"

namespace solvq::qsim {

using Complex = std::complex<double>;

/// Tolerance for every state comparison.
inline constexpr double kTolerance = 1e-9;
/// Amplitudes at or below this magnitude are dropped.
inline constexpr double kPruneThreshold = 1e-12;

/// e_m(k) = exp(2 pi i k / m). Quarter turns are exact.
Complex unit_root(std::int64_t k, std::uint64_t m);

enum class RegisterKind { group, modular };
enum class Direction { forward, adjoint };

struct Register {
  std::string name;
  RegisterKind kind = RegisterKind::modular;
  /// Modulus for modular registers, encoding length in bits for group ones.
  std::uint64_t size = 1;

  static Register group(std::string name, unsigned encoding_length);
  static Register modular(std::string name, std::uint64_t modulus);

  /// Same domain; names are ignored.
  bool same_domain(const Register& other) const { return kind == other.kind && size == other.size; }
};

/// Normalized sparse amplitude map. Labels are tuples with one value per
/// register, stored flat and kept in lexicographic order without duplicates.
class QState {
 public:
  QState() = default;

  const std::vector<Register>& layout() const { return layout_; }
  std::size_t width() const { return layout_.size(); }
  /// Number of basis tuples with nonzero amplitude.
  std::size_t size() const { return amps_.size(); }

  std::span<const std::uint64_t> label(std::size_t i) const {
    return {labels_.data() + i * width(), width()};
  }
  Complex amplitude(std::size_t i) const { return amps_[i]; }
  /// Amplitude of an arbitrary label (zero when absent).
  Complex amplitude_of(std::span<const std::uint64_t> label) const;

  double norm_squared() const;
  std::size_t register_index(std::string_view name) const;

 private:
  friend class StateBuilder;

  std::vector<Register> layout_;
  std::vector<std::uint64_t> labels_;
  std::vector<Complex> amps_;
};

/// Accumulates (label, amplitude) pairs; duplicates are summed.
class StateBuilder {
 public:
  explicit StateBuilder(std::vector<Register> layout);

  void reserve(std::size_t entries);
  void add(std::span<const std::uint64_t> label, Complex amp);
  /// Sorts, merges and prunes. With `normalize`, rescales to unit norm.
  QState build(bool normalize = false);

 private:
  std::vector<Register> layout_;
  std::vector<std::uint64_t> labels_;
  std::vector<Complex> amps_;
};

QState basis_state(std::vector<Register> layout, std::span<const std::uint64_t> label);

/// |S> = |S|^{-1/2} sum_{s in S} |s> on a single register. Throws EmptySet.
QState uniform_state(const Register& reg, std::span<const std::uint64_t> values);
QState uniform_state(const GroupOracle& oracle, std::span<const Encoding> elements,
                     std::string name = "R");

/// QFT_N on a modular register: |a> -> N^{-1/2} sum_b e_N(+-ab) |b>.
/// Dense per column; throws DomainMismatch for group registers.
void apply_qft(QState& state, std::size_t reg, Direction dir = Direction::forward);

/// |a>|x> -> |a>|g^a x> with a read from a modular control register.
void controlled_left_multiply(QState& state, const GroupOracle& oracle, std::size_t control,
                              std::size_t target, Encoding g);

/// |x> -> |g x> on one group register.
void left_multiply(QState& state, const GroupOracle& oracle, std::size_t target, Encoding g);

/// |f>|x> -> |f>|f^c x> for two group registers.
void element_power_multiply(QState& state, const GroupOracle& oracle, std::size_t source,
                            std::size_t target, std::int64_t c);

/// Exact marginal distribution of one register.
std::map<std::uint64_t, double> outcome_distribution(const QState& state, std::size_t reg);

/// Samples a computational-basis outcome and collapses the state onto it.
std::uint64_t measure(QState& state, std::size_t reg, Rng& rng);

/// Conditions on `reg == value` and renormalizes. Throws DomainMismatch when
/// the outcome has zero probability.
void postselect(QState& state, std::size_t reg, std::uint64_t value);

/// Removes a register that holds a single basis value.
QState drop_register(const QState& state, std::size_t reg);

/// Layout a ++ b, amplitudes multiplied.
QState tensor(const QState& a, const QState& b);

/// Reorders registers; `order[i]` is the old index of the new register i.
QState permute_registers(const QState& state, std::span<const std::size_t> order);

/// <a|b>. Throws LayoutMismatch when domains differ.
Complex inner_product(const QState& a, const QState& b);
double fidelity(const QState& a, const QState& b);
/// sqrt(1 - |<a|b>|^2) for pure states.
double trace_distance(const QState& a, const QState& b);

/// Splits the registers into `first` and the rest and, when the state is a
/// product across that cut within kTolerance, returns the two normalized
/// factors. The global phase is moved onto the second factor.
std::optional<std::pair<QState, QState>> factorize(const QState& state,
                                                   std::span<const std::size_t> first);
bool factor_check(const QState& state, std::span<const std::size_t> first);

/// One line per basis tuple, lexicographic: register values (group values in
/// hex, modular values in decimal) then real and imaginary parts. With
/// `canonical_phase` the first amplitude is rotated onto the positive reals.
void dump(const QState& state, std::ostream& out, bool canonical_phase = false);
std::string dump_string(const QState& state, bool canonical_phase = false);

}  // namespace solvq::qsim
