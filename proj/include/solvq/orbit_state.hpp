#pragma once

// Compact form of N^{-1/2} sum_{a in Z_N} |a> (x) g^a|phi>, the joint state of
// a uniform control register after a controlled left multiplication. Only
// the orbit phi, g phi, ..., g^{p-1} phi is stored, so moduli far beyond what
// the dense simulator can hold remain cheap. Fourier-basis probabilities of
// the control register are evaluated in closed form.

#include <cstdint>
#include <utility>
#include <vector>

#include "solvq/blackbox.hpp"
#include "solvq/qsim.hpp"
#include "solvq/rng.hpp"

namespace solvq::qsim {

class OrbitState {
 public:
  /// `target` must have a single group register. Costs p left
  /// multiplications of the whole target support.
  static OrbitState prepare(const GroupOracle& oracle, Encoding g, const QState& target,
                            std::uint64_t modulus);

  std::uint64_t modulus() const { return modulus_; }
  /// Smallest p > 0 with g^p|phi> = |phi>.
  std::uint64_t period() const { return period_; }
  const Register& target_register() const { return target_; }
  /// Distinct target labels over the whole orbit.
  const std::vector<std::uint64_t>& support() const { return support_; }

  /// The full two-register state (control first). Size N times |support|.
  QState materialize() const;

  /// Probability of observing b after a QFT on the control register.
  double fourier_probability(std::uint64_t b, Direction dir) const;
  /// All N outcome probabilities.
  std::vector<double> fourier_distribution(Direction dir) const;

  /// Applies the QFT to the control register, measures it and returns the
  /// outcome with the collapsed (control, target) state.
  std::pair<std::uint64_t, QState> measure_fourier(Direction dir, Rng& rng) const;

 private:
  // Amplitude column of the target after observing b.
  std::vector<Complex> fourier_column(std::uint64_t b, Direction dir) const;
  std::uint64_t run_length(std::uint64_t s) const;

  std::uint64_t modulus_ = 1;
  std::uint64_t period_ = 1;
  Register target_;
  std::vector<std::uint64_t> support_;
  // For support label x, entries col_offsets_[x]..col_offsets_[x+1] list the
  // orbit positions s with <x| g^s |phi> != 0 and those amplitudes.
  std::vector<std::size_t> col_offsets_;
  std::vector<std::uint64_t> col_s_;
  std::vector<Complex> col_amp_;
};

/// sum_{j<L} e_N(j u), evaluated in closed form with exact integer angle
/// reduction.
Complex geometric_sum(std::uint64_t length, std::uint64_t u, std::uint64_t modulus);

}  // namespace solvq::qsim
