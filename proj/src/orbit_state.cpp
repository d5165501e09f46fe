#include "solvq/orbit_state.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <tuple>

#include "solvq/errors.hpp"
#include "solvq/numtheory.hpp"

namespace solvq::qsim {
namespace {

using numtheory::mul_mod;

constexpr std::uint64_t kMaxDirectModulus = std::uint64_t{1} << 22;

// |sum_{j<L} e_N(j u)|^2 for 0 <= u < N.
double geometric_norm(std::uint64_t length, std::uint64_t u, std::uint64_t n) {
  if (u == 0) return static_cast<double>(length) * static_cast<double>(length);
  if (mul_mod(u, length, n) == 0) return 0.0;
  const double num = std::sin(std::numbers::pi * static_cast<double>(mul_mod(u, length, 2 * n)) / static_cast<double>(n));
  const double den = std::sin(std::numbers::pi * static_cast<double>(u) / static_cast<double>(n));
  return (num * num) / (den * den);
}

// Draws b in Z_N with probability proportional to |G(L, p b mod N)|^2.
// With d = gcd(p, N) and M = N / d, p b mod N = d w where w = (p/d) b mod M,
// and every w has exactly d preimages b. So w is drawn with weight
// K(w) = |G(L, d w)|^2 and b is recovered by inverting p/d modulo M.
// Small M uses block prefix sums (one rescanned block per draw); large M uses
// rejection under the envelope min(L^2, N^2 / (4 d^2 |w|(|w|-1))), which
// dominates K because sin(pi x / N) >= 2|x| / N on |x| <= N/2.
class KernelSampler {
 public:
  static constexpr std::uint64_t kTableLimit = std::uint64_t{1} << 20;

  KernelSampler(std::uint64_t n, std::uint64_t p, std::uint64_t length) : n_(n), length_(length) {
    d_ = std::gcd(p % n, n);
    m_ = n / d_;
    inv_ = m_ == 1 ? 0 : *numtheory::inverse_mod((p % n) / d_, m_);
    if (m_ <= kTableLimit) {
      block_ = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::sqrt(static_cast<double>(m_))));
      double acc = 0.0;
      for (std::uint64_t start = 0; start < m_; start += block_) {
        const std::uint64_t end = std::min(m_, start + block_);
        for (std::uint64_t w = start; w < end; ++w) acc += weight(w);
        prefix_.push_back(acc);
      }
    } else {
      // Envelope: flat L^2 on |w| < a, telescoping tails C / (|w|(|w|-1)).
      const double md = static_cast<double>(m_);
      a_ = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::ceil(md / (2.0 * static_cast<double>(length_)))));
      hi_ = m_ / 2;
      lo_ = (m_ - 1) / 2;
      a_ = std::min(a_, lo_);
      c_ = md * md / 4.0;
      const double l2 = static_cast<double>(length_) * static_cast<double>(length_);
      center_mass_ = l2 * static_cast<double>(2 * a_ - 1);
      pos_mass_ = c_ * (1.0 / static_cast<double>(a_ - 1) - 1.0 / static_cast<double>(hi_));
      neg_mass_ = c_ * (1.0 / static_cast<double>(a_ - 1) - 1.0 / static_cast<double>(lo_));
    }
  }

  std::uint64_t sample(Rng& rng) const {
    const std::uint64_t w = prefix_.empty() ? sample_envelope(rng) : sample_table(rng);
    const std::uint64_t base = numtheory::mul_mod(w, inv_, m_);
    return d_ == 1 ? base : base + rng.below(d_) * m_;
  }

 private:
  double weight(std::uint64_t w) const { return geometric_norm(length_, d_ * w % n_, n_); }

  std::uint64_t sample_table(Rng& rng) const {
    const double u = rng.uniform() * prefix_.back();
    auto it = std::upper_bound(prefix_.begin(), prefix_.end(), u);
    if (it == prefix_.end()) --it;
    const auto blk = static_cast<std::uint64_t>(it - prefix_.begin());
    double acc = blk == 0 ? 0.0 : prefix_[blk - 1];
    const std::uint64_t start = blk * block_;
    const std::uint64_t end = std::min(m_, start + block_);
    std::uint64_t last_nonzero = start;
    for (std::uint64_t w = start; w < end; ++w) {
      const double x = weight(w);
      if (x > 0.0) last_nonzero = w;
      acc += x;
      if (u < acc) return w;
    }
    return last_nonzero;
  }

  // Inverse CDF of q(w) ~ 1/(w(w-1)) on [a, top]: F(w) = (1/(a-1) - 1/w) / Z.
  std::uint64_t sample_tail(Rng& rng, std::uint64_t top) const {
    const double inv_a = 1.0 / static_cast<double>(a_ - 1);
    const double z = inv_a - 1.0 / static_cast<double>(top);
    const double x = 1.0 / (inv_a - rng.uniform() * z);
    const auto w = static_cast<std::uint64_t>(std::ceil(x));
    return std::clamp(w, a_, top);
  }

  std::uint64_t sample_envelope(Rng& rng) const {
    const double l2 = static_cast<double>(length_) * static_cast<double>(length_);
    const double total = center_mass_ + pos_mass_ + neg_mass_;
    for (;;) {
      const double pick = rng.uniform() * total;
      std::uint64_t mag;
      bool negative;
      double envelope;
      if (pick < center_mass_) {
        const std::uint64_t k = rng.below(2 * a_ - 1);
        negative = k >= a_;
        mag = negative ? k - a_ + 1 : k;
        envelope = l2;
      } else {
        negative = pick >= center_mass_ + pos_mass_;
        mag = sample_tail(rng, negative ? lo_ : hi_);
        envelope = c_ / (static_cast<double>(mag) * static_cast<double>(mag - 1));
      }
      const std::uint64_t w = negative ? m_ - mag : mag;
      if (rng.uniform() * envelope < weight(w)) return w;
    }
  }

  std::uint64_t n_, length_, d_ = 1, m_ = 1, inv_ = 0;
  // Table mode.
  std::uint64_t block_ = 1;
  std::vector<double> prefix_;
  // Envelope mode: w ranges over -lo_..hi_.
  std::uint64_t a_ = 2, hi_ = 0, lo_ = 0;
  double c_ = 0.0, center_mass_ = 0.0, pos_mass_ = 0.0, neg_mass_ = 0.0;
};

std::shared_ptr<const KernelSampler> kernel_sampler(std::uint64_t n, std::uint64_t p, std::uint64_t length) {
  static std::mutex mutex;
  static std::map<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>, std::shared_ptr<const KernelSampler>> cache;
  const auto key = std::make_tuple(n, p % n, length);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto sampler = std::make_shared<const KernelSampler>(n, p, length);
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(sampler)).first->second;
}

std::uint64_t sample_index(const std::vector<double>& weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::uint64_t last_nonzero = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) last_nonzero = i;
    acc += weights[i];
    if (u < acc) return i;
  }
  return last_nonzero;
}

bool same_state(const QState& a, const QState& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.label(i)[0] != b.label(i)[0]) return false;
    if (std::abs(a.amplitude(i) - b.amplitude(i)) > kPruneThreshold) return false;
  }
  return true;
}

}  // namespace

Complex geometric_sum(std::uint64_t length, std::uint64_t u, std::uint64_t modulus) {
  u %= modulus;
  if (u == 0) return static_cast<double>(length);
  if (mul_mod(u, length, modulus) == 0) return 0.0;
  const std::uint64_t two_n = 2 * modulus;
  const double num = std::sin(std::numbers::pi * static_cast<double>(mul_mod(u, length, two_n)) /
                              static_cast<double>(modulus));
  const double den = std::sin(std::numbers::pi * static_cast<double>(u) / static_cast<double>(modulus));
  const Complex phase = unit_root(static_cast<std::int64_t>(mul_mod(u, length - 1, two_n)), two_n);
  return phase * (num / den);
}

OrbitState OrbitState::prepare(const GroupOracle& oracle, Encoding g, const QState& target,
                               std::uint64_t modulus) {
  if (target.width() != 1 || target.layout()[0].kind != RegisterKind::group) {
    throw DomainMismatch("orbit state needs a single group register as target");
  }
  if (modulus == 0) throw DomainMismatch("orbit state needs a positive modulus");
  OrbitState out;
  out.modulus_ = modulus;
  out.target_ = target.layout()[0];

  std::vector<QState> orbit{target};
  const std::uint64_t cap = oracle.encoding_length() >= 63 ? UINT64_MAX : (std::uint64_t{1} << oracle.encoding_length());
  for (;;) {
    QState next = orbit.back();
    left_multiply(next, oracle, 0, g);
    if (same_state(next, target)) break;
    if (orbit.size() >= cap) throw DomainMismatch("orbit did not close");
    orbit.push_back(std::move(next));
  }
  out.period_ = orbit.size();

  std::map<std::uint64_t, std::size_t> index;
  for (const QState& phi : orbit) {
    for (std::size_t i = 0; i < phi.size(); ++i) index.emplace(phi.label(i)[0], 0);
  }
  for (auto& [label, idx] : index) {
    idx = out.support_.size();
    out.support_.push_back(label);
  }
  // Column-major CSR: for each support label, the orbit positions holding it.
  std::vector<std::vector<std::pair<std::uint64_t, Complex>>> columns(out.support_.size());
  for (std::uint64_t s = 0; s < orbit.size(); ++s) {
    for (std::size_t i = 0; i < orbit[s].size(); ++i) {
      columns[index.at(orbit[s].label(i)[0])].emplace_back(s, orbit[s].amplitude(i));
    }
  }
  out.col_offsets_.push_back(0);
  for (const auto& col : columns) {
    for (const auto& [s, amp] : col) {
      out.col_s_.push_back(s);
      out.col_amp_.push_back(amp);
    }
    out.col_offsets_.push_back(out.col_s_.size());
  }
  return out;
}

std::uint64_t OrbitState::run_length(std::uint64_t s) const {
  return s < modulus_ ? (modulus_ - 1 - s) / period_ + 1 : 0;
}

QState OrbitState::materialize() const {
  StateBuilder builder({Register::modular("A", modulus_), target_});
  const double scale = 1.0 / std::sqrt(static_cast<double>(modulus_));
  std::uint64_t label[2];
  for (std::size_t x = 0; x < support_.size(); ++x) {
    label[1] = support_[x];
    for (std::size_t e = col_offsets_[x]; e < col_offsets_[x + 1]; ++e) {
      for (std::uint64_t a = col_s_[e]; a < modulus_; a += period_) {
        label[0] = a;
        builder.add(label, col_amp_[e] * scale);
      }
    }
  }
  return builder.build();
}

std::vector<Complex> OrbitState::fourier_column(std::uint64_t b, Direction dir) const {
  const std::uint64_t n = modulus_;
  const std::uint64_t pb = mul_mod(period_ % n, b, n);
  const std::uint64_t u = dir == Direction::forward ? pb : (n - pb) % n;
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<Complex> coeff(std::min(period_, n));
  for (std::uint64_t s = 0; s < coeff.size(); ++s) {
    const std::uint64_t sb = mul_mod(s, b, n);
    const std::uint64_t phase = dir == Direction::forward ? sb : (n - sb) % n;
    coeff[s] = unit_root(static_cast<std::int64_t>(phase), n) * geometric_sum(run_length(s), u, n) * inv_n;
  }
  std::vector<Complex> column(support_.size());
  for (std::size_t x = 0; x < support_.size(); ++x) {
    for (std::size_t e = col_offsets_[x]; e < col_offsets_[x + 1]; ++e) {
      if (col_s_[e] < coeff.size()) column[x] += coeff[col_s_[e]] * col_amp_[e];
    }
  }
  return column;
}

double OrbitState::fourier_probability(std::uint64_t b, Direction dir) const {
  if (b >= modulus_) throw DomainMismatch("outcome outside Z_N");
  double total = 0.0;
  for (const Complex& a : fourier_column(b, dir)) total += std::norm(a);
  return total;
}

std::vector<double> OrbitState::fourier_distribution(Direction dir) const {
  std::vector<double> dist(modulus_);
  for (std::uint64_t b = 0; b < modulus_; ++b) dist[b] = fourier_probability(b, dir);
  return dist;
}

std::pair<std::uint64_t, QState> OrbitState::measure_fourier(Direction dir, Rng& rng) const {
  const std::uint64_t n = modulus_;
  // The target marginal is unchanged by a transform on the control, so draw
  // the target label first and then b from its conditional distribution.
  std::vector<double> weights(support_.size());
  for (std::size_t x = 0; x < support_.size(); ++x) {
    for (std::size_t e = col_offsets_[x]; e < col_offsets_[x + 1]; ++e) {
      weights[x] += static_cast<double>(run_length(col_s_[e])) * std::norm(col_amp_[e]);
    }
  }
  const std::size_t x = sample_index(weights, rng);

  std::uint64_t b;
  std::size_t live = 0;
  std::uint64_t only_s = 0;
  for (std::size_t e = col_offsets_[x]; e < col_offsets_[x + 1]; ++e) {
    if (run_length(col_s_[e]) > 0) {
      ++live;
      only_s = col_s_[e];
    }
  }
  if (live == 1) {
    // A single orbit position: |amp(b, x)|^2 is proportional to |G(L, pb)|^2.
    b = kernel_sampler(n, period_, run_length(only_s))->sample(rng);
  } else {
    if (n > kMaxDirectModulus) {
      throw SizeLimitExceeded("overlapping orbit needs a direct scan over a modulus of " + std::to_string(n));
    }
    std::vector<double> conditional(n);
    for (std::uint64_t c = 0; c < n; ++c) conditional[c] = std::norm(fourier_column(c, dir)[x]);
    b = sample_index(conditional, rng);
  }

  const auto column = fourier_column(b, dir);
  StateBuilder builder({Register::modular("A", n), target_});
  std::uint64_t label[2] = {b, 0};
  for (std::size_t y = 0; y < support_.size(); ++y) {
    label[1] = support_[y];
    builder.add(label, column[y]);
  }
  return {b, builder.build(true)};
}

}  // namespace solvq::qsim
