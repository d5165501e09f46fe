#include "solvq/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "solvq/errors.hpp"

namespace solvq::qsim {
namespace {

using LabelSpan = std::span<const std::uint64_t>;

bool label_less(LabelSpan a, LabelSpan b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool label_equal(LabelSpan a, LabelSpan b) { return std::equal(a.begin(), a.end(), b.begin(), b.end()); }

std::uint64_t domain_bound(const Register& reg) {
  if (reg.kind == RegisterKind::modular) return reg.size;
  return reg.size >= 64 ? 0 : (std::uint64_t{1} << reg.size);
}

void check_index(const QState& state, std::size_t reg) {
  if (reg >= state.width()) {
    throw DomainMismatch("register index " + std::to_string(reg) + " out of range");
  }
}

void require_kind(const QState& state, std::size_t reg, RegisterKind kind, const char* op) {
  check_index(state, reg);
  if (state.layout()[reg].kind != kind) {
    throw DomainMismatch(std::string(op) + ": register '" + state.layout()[reg].name + "' has the wrong domain");
  }
}

void require_same_layout(const QState& a, const QState& b) {
  if (a.width() != b.width()) throw LayoutMismatch("states have different register counts");
  for (std::size_t i = 0; i < a.width(); ++i) {
    if (!a.layout()[i].same_domain(b.layout()[i])) {
      throw LayoutMismatch("register " + std::to_string(i) + " differs in domain");
    }
  }
}

// Applies `f` to every label and rebuilds; `f` rewrites the label in place.
template <typename F>
QState relabel(const QState& state, F&& f) {
  StateBuilder builder(state.layout());
  builder.reserve(state.size());
  std::vector<std::uint64_t> label(state.width());
  for (std::size_t i = 0; i < state.size(); ++i) {
    auto src = state.label(i);
    std::copy(src.begin(), src.end(), label.begin());
    f(label);
    builder.add(label, state.amplitude(i));
  }
  return builder.build();
}

}  // namespace

Complex unit_root(std::int64_t k, std::uint64_t m) {
  if (m == 0) throw DomainMismatch("unit_root with modulus 0");
  const auto mm = static_cast<__int128>(m);
  __int128 r = static_cast<__int128>(k) % mm;
  if (r < 0) r += mm;
  if ((r * 4) % mm == 0) {
    switch (static_cast<int>((r * 4) / mm)) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  // Use the representative closest to zero for the best angle accuracy.
  if (r * 2 > mm) r -= mm;
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(m);
  return {std::cos(angle), std::sin(angle)};
}

Register Register::group(std::string name, unsigned encoding_length) {
  return Register{std::move(name), RegisterKind::group, encoding_length};
}

Register Register::modular(std::string name, std::uint64_t modulus) {
  if (modulus == 0) throw DomainMismatch("modular register needs a positive modulus");
  return Register{std::move(name), RegisterKind::modular, modulus};
}

Complex QState::amplitude_of(std::span<const std::uint64_t> label) const {
  if (label.size() != width()) throw LayoutMismatch("label width does not match the layout");
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (label_less(this->label(mid), label)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < size() && label_equal(this->label(lo), label)) return amps_[lo];
  return {0.0, 0.0};
}

double QState::norm_squared() const {
  double total = 0.0;
  for (const Complex& a : amps_) total += std::norm(a);
  return total;
}

std::size_t QState::register_index(std::string_view name) const {
  for (std::size_t i = 0; i < layout_.size(); ++i) {
    if (layout_[i].name == name) return i;
  }
  throw DomainMismatch("no register named '" + std::string(name) + "'");
}

StateBuilder::StateBuilder(std::vector<Register> layout) : layout_(std::move(layout)) {}

void StateBuilder::reserve(std::size_t entries) {
  labels_.reserve(entries * layout_.size());
  amps_.reserve(entries);
}

void StateBuilder::add(std::span<const std::uint64_t> label, Complex amp) {
  if (label.size() != layout_.size()) throw LayoutMismatch("label width does not match the layout");
  for (std::size_t i = 0; i < label.size(); ++i) {
    const std::uint64_t bound = domain_bound(layout_[i]);
    if (bound != 0 && label[i] >= bound) {
      throw DomainMismatch("value " + std::to_string(label[i]) + " outside register '" + layout_[i].name + "'");
    }
  }
  labels_.insert(labels_.end(), label.begin(), label.end());
  amps_.push_back(amp);
}

QState StateBuilder::build(bool normalize) {
  const std::size_t w = layout_.size();
  const std::size_t n = amps_.size();
  auto at = [&](std::size_t i) { return LabelSpan(labels_.data() + i * w, w); };

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return label_less(at(a), at(b)); });

  QState state;
  state.layout_ = layout_;
  for (std::size_t i = 0; i < n;) {
    Complex sum = amps_[order[i]];
    std::size_t j = i + 1;
    while (j < n && label_equal(at(order[i]), at(order[j]))) sum += amps_[order[j++]];
    if (std::abs(sum) > kPruneThreshold) {
      auto l = at(order[i]);
      state.labels_.insert(state.labels_.end(), l.begin(), l.end());
      state.amps_.push_back(sum);
    }
    i = j;
  }
  if (normalize) {
    const double norm = std::sqrt(state.norm_squared());
    if (norm == 0.0) throw DomainMismatch("cannot normalize the zero vector");
    for (Complex& a : state.amps_) a /= norm;
  }
  labels_.clear();
  amps_.clear();
  return state;
}

QState basis_state(std::vector<Register> layout, std::span<const std::uint64_t> label) {
  StateBuilder builder(std::move(layout));
  builder.add(label, 1.0);
  return builder.build();
}

QState uniform_state(const Register& reg, std::span<const std::uint64_t> values) {
  std::vector<std::uint64_t> distinct(values.begin(), values.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.empty()) throw EmptySet("uniform superposition over an empty set");
  const double amp = 1.0 / std::sqrt(static_cast<double>(distinct.size()));
  StateBuilder builder({reg});
  builder.reserve(distinct.size());
  for (std::uint64_t v : distinct) builder.add(std::span(&v, 1), amp);
  return builder.build();
}

QState uniform_state(const GroupOracle& oracle, std::span<const Encoding> elements, std::string name) {
  std::vector<std::uint64_t> values;
  values.reserve(elements.size());
  for (Encoding e : elements) {
    if (!oracle.is_valid(e)) throw InvalidEncoding("element " + oracle.hex(e) + " is not a valid encoding");
    values.push_back(e.bits);
  }
  return uniform_state(Register::group(std::move(name), oracle.encoding_length()), values);
}

void apply_qft(QState& state, std::size_t reg, Direction dir) {
  require_kind(state, reg, RegisterKind::modular, "qft");
  const std::uint64_t n = state.layout()[reg].size;
  if (n == 1) return;
  constexpr std::uint64_t kMaxDenseModulus = std::uint64_t{1} << 24;
  if (n > kMaxDenseModulus) {
    throw SizeLimitExceeded("dense QFT modulus " + std::to_string(n) + " is too large");
  }
  std::vector<Complex> roots(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    roots[k] = unit_root(static_cast<std::int64_t>(k), n);
    if (dir == Direction::adjoint) roots[k] = std::conj(roots[k]);
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));

  // Group entries into columns that agree on every other register.
  const std::size_t w = state.width();
  auto rest_less = [&](std::size_t a, std::size_t b) {
    auto la = state.label(a), lb = state.label(b);
    for (std::size_t i = 0; i < w; ++i) {
      if (i == reg) continue;
      if (la[i] != lb[i]) return la[i] < lb[i];
    }
    return false;
  };
  std::vector<std::size_t> order(state.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), rest_less);

  StateBuilder builder(state.layout());
  std::vector<Complex> column(n);
  std::vector<std::uint64_t> label(w);
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && !rest_less(order[i], order[j])) ++j;
    std::fill(column.begin(), column.end(), Complex{});
    for (std::size_t e = i; e < j; ++e) {
      const std::uint64_t a = state.label(order[e])[reg];
      const Complex amp = state.amplitude(order[e]) * scale;
      std::uint64_t idx = 0;
      for (std::uint64_t b = 0; b < n; ++b) {
        column[b] += amp * roots[idx];
        idx += a;
        if (idx >= n) idx -= n;
      }
    }
    auto src = state.label(order[i]);
    std::copy(src.begin(), src.end(), label.begin());
    for (std::uint64_t b = 0; b < n; ++b) {
      if (std::abs(column[b]) <= kPruneThreshold) continue;
      label[reg] = b;
      builder.add(label, column[b]);
    }
    i = j;
  }
  state = builder.build();
}

void controlled_left_multiply(QState& state, const GroupOracle& oracle, std::size_t control,
                              std::size_t target, Encoding g) {
  require_kind(state, control, RegisterKind::modular, "controlled_left_multiply");
  require_kind(state, target, RegisterKind::group, "controlled_left_multiply");
  std::unordered_map<std::uint64_t, Encoding> powers;
  state = relabel(state, [&](std::vector<std::uint64_t>& label) {
    const std::uint64_t a = label[control];
    auto it = powers.find(a);
    if (it == powers.end()) it = powers.emplace(a, oracle.power(g, static_cast<std::int64_t>(a))).first;
    label[target] = oracle.multiply(it->second, Encoding{label[target]}).bits;
  });
}

void left_multiply(QState& state, const GroupOracle& oracle, std::size_t target, Encoding g) {
  require_kind(state, target, RegisterKind::group, "left_multiply");
  state = relabel(state, [&](std::vector<std::uint64_t>& label) {
    label[target] = oracle.multiply(g, Encoding{label[target]}).bits;
  });
}

void element_power_multiply(QState& state, const GroupOracle& oracle, std::size_t source,
                            std::size_t target, std::int64_t c) {
  require_kind(state, source, RegisterKind::group, "element_power_multiply");
  require_kind(state, target, RegisterKind::group, "element_power_multiply");
  if (source == target) throw DomainMismatch("element_power_multiply needs two distinct registers");
  std::unordered_map<std::uint64_t, Encoding> powers;
  state = relabel(state, [&](std::vector<std::uint64_t>& label) {
    const std::uint64_t f = label[source];
    auto it = powers.find(f);
    if (it == powers.end()) it = powers.emplace(f, oracle.power(Encoding{f}, c)).first;
    label[target] = oracle.multiply(it->second, Encoding{label[target]}).bits;
  });
}

std::map<std::uint64_t, double> outcome_distribution(const QState& state, std::size_t reg) {
  check_index(state, reg);
  std::map<std::uint64_t, double> dist;
  for (std::size_t i = 0; i < state.size(); ++i) dist[state.label(i)[reg]] += std::norm(state.amplitude(i));
  return dist;
}

std::uint64_t measure(QState& state, std::size_t reg, Rng& rng) {
  const auto dist = outcome_distribution(state, reg);
  if (dist.empty()) throw DomainMismatch("cannot measure the zero vector");
  double total = 0.0;
  for (const auto& [value, p] : dist) total += p;
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::uint64_t outcome = dist.rbegin()->first;
  for (const auto& [value, p] : dist) {
    acc += p;
    if (u < acc) {
      outcome = value;
      break;
    }
  }
  postselect(state, reg, outcome);
  return outcome;
}

void postselect(QState& state, std::size_t reg, std::uint64_t value) {
  check_index(state, reg);
  StateBuilder builder(state.layout());
  bool found = false;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state.label(i)[reg] == value) {
      builder.add(state.label(i), state.amplitude(i));
      found = true;
    }
  }
  if (!found) throw DomainMismatch("outcome " + std::to_string(value) + " has probability zero");
  state = builder.build(true);
}

QState drop_register(const QState& state, std::size_t reg) {
  check_index(state, reg);
  if (state.size() == 0) throw DomainMismatch("cannot drop a register of the zero vector");
  const std::uint64_t value = state.label(0)[reg];
  std::vector<Register> layout = state.layout();
  layout.erase(layout.begin() + static_cast<std::ptrdiff_t>(reg));
  StateBuilder builder(std::move(layout));
  std::vector<std::uint64_t> label;
  for (std::size_t i = 0; i < state.size(); ++i) {
    auto src = state.label(i);
    if (src[reg] != value) {
      throw DomainMismatch("register '" + state.layout()[reg].name + "' is not in a basis state");
    }
    label.assign(src.begin(), src.end());
    label.erase(label.begin() + static_cast<std::ptrdiff_t>(reg));
    builder.add(label, state.amplitude(i));
  }
  return builder.build();
}

QState tensor(const QState& a, const QState& b) {
  std::vector<Register> layout = a.layout();
  layout.insert(layout.end(), b.layout().begin(), b.layout().end());
  StateBuilder builder(std::move(layout));
  builder.reserve(a.size() * b.size());
  std::vector<std::uint64_t> label(a.width() + b.width());
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto la = a.label(i);
    std::copy(la.begin(), la.end(), label.begin());
    for (std::size_t j = 0; j < b.size(); ++j) {
      auto lb = b.label(j);
      std::copy(lb.begin(), lb.end(), label.begin() + static_cast<std::ptrdiff_t>(a.width()));
      builder.add(label, a.amplitude(i) * b.amplitude(j));
    }
  }
  return builder.build();
}

QState permute_registers(const QState& state, std::span<const std::size_t> order) {
  if (order.size() != state.width()) throw LayoutMismatch("permutation width does not match the layout");
  std::vector<bool> used(state.width(), false);
  std::vector<Register> layout;
  for (std::size_t old : order) {
    if (old >= state.width() || used[old]) throw LayoutMismatch("not a permutation of the registers");
    used[old] = true;
    layout.push_back(state.layout()[old]);
  }
  StateBuilder builder(std::move(layout));
  builder.reserve(state.size());
  std::vector<std::uint64_t> label(state.width());
  for (std::size_t i = 0; i < state.size(); ++i) {
    auto src = state.label(i);
    for (std::size_t k = 0; k < order.size(); ++k) label[k] = src[order[k]];
    builder.add(label, state.amplitude(i));
  }
  return builder.build();
}

Complex inner_product(const QState& a, const QState& b) {
  require_same_layout(a, b);
  Complex sum{};
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (label_less(a.label(i), b.label(j))) {
      ++i;
    } else if (label_less(b.label(j), a.label(i))) {
      ++j;
    } else {
      sum += std::conj(a.amplitude(i)) * b.amplitude(j);
      ++i;
      ++j;
    }
  }
  return sum;
}

double fidelity(const QState& a, const QState& b) { return std::norm(inner_product(a, b)); }

double trace_distance(const QState& a, const QState& b) {
  // 1 - |<a|b>|^2 = (d^2 / 2)(2 - d^2 / 2) with d = |a - e^{i theta} b| after
  // aligning phases. Summing d^2 directly keeps precision for nearby states
  // where 1 - fidelity would cancel to rounding noise.
  const Complex ip = inner_product(a, b);
  const double scale_a = 1.0 / std::sqrt(a.norm_squared());
  const double scale_b = 1.0 / std::sqrt(b.norm_squared());
  const Complex align = std::abs(ip) > 0.0 ? ip / std::abs(ip) : Complex(1.0, 0.0);
  double d2 = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && label_less(a.label(i), b.label(j)))) {
      d2 += std::norm(a.amplitude(i++) * scale_a);
    } else if (i == a.size() || label_less(b.label(j), a.label(i))) {
      d2 += std::norm(b.amplitude(j++) * scale_b);
    } else {
      d2 += std::norm(a.amplitude(i++) * scale_a * align - b.amplitude(j++) * scale_b);
    }
  }
  const double half = std::min(d2 / 2.0, 1.0);
  return std::sqrt(std::max(0.0, half * (2.0 - half)));
}

std::optional<std::pair<QState, QState>> factorize(const QState& state, std::span<const std::size_t> first) {
  const std::size_t w = state.width();
  std::vector<bool> in_first(w, false);
  for (std::size_t r : first) {
    if (r >= w || in_first[r]) throw LayoutMismatch("invalid register split");
    in_first[r] = true;
  }
  std::vector<std::size_t> second;
  for (std::size_t r = 0; r < w; ++r) {
    if (!in_first[r]) second.push_back(r);
  }
  if (state.size() == 0) return std::nullopt;

  auto project = [&](std::size_t i, std::span<const std::size_t> regs) {
    std::vector<std::uint64_t> key(regs.size());
    auto l = state.label(i);
    for (std::size_t k = 0; k < regs.size(); ++k) key[k] = l[regs[k]];
    return key;
  };
  std::map<std::vector<std::uint64_t>, std::size_t> rows, cols;
  std::vector<std::size_t> row_of(state.size()), col_of(state.size());
  std::size_t pivot = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    row_of[i] = rows.emplace(project(i, first), rows.size()).first->second;
    col_of[i] = cols.emplace(project(i, second), cols.size()).first->second;
    if (std::abs(state.amplitude(i)) > std::abs(state.amplitude(pivot))) pivot = i;
  }

  // Candidate factors read off the pivot's row and column.
  const Complex p = state.amplitude(pivot);
  std::vector<Complex> alpha(rows.size()), beta(cols.size());
  std::size_t beta_support = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (col_of[i] == col_of[pivot]) {
      alpha[row_of[i]] = state.amplitude(i);
    }
    if (row_of[i] == row_of[pivot]) {
      beta[col_of[i]] = state.amplitude(i) / p;
      ++beta_support;
    }
  }

  double beta_total = 0.0;
  for (const Complex& b : beta) beta_total += std::norm(b);
  double residual = 0.0;
  std::vector<double> row_present(rows.size(), 0.0);
  std::vector<std::size_t> row_count(rows.size(), 0);
  for (std::size_t i = 0; i < state.size(); ++i) {
    const Complex predicted = alpha[row_of[i]] * beta[col_of[i]];
    residual += std::norm(state.amplitude(i) - predicted);
    if (alpha[row_of[i]] != Complex{} && beta[col_of[i]] != Complex{}) {
      row_present[row_of[i]] += std::norm(beta[col_of[i]]);
      ++row_count[row_of[i]];
    }
  }
  // Products alpha_r beta_c whose label is absent from the state.
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (alpha[r] == Complex{} || row_count[r] == beta_support) continue;
    residual += std::norm(alpha[r]) * std::max(0.0, beta_total - row_present[r]);
  }
  if (std::sqrt(residual) > kTolerance) return std::nullopt;

  std::vector<Register> layout_a, layout_b;
  for (std::size_t r : first) layout_a.push_back(state.layout()[r]);
  for (std::size_t r : second) layout_b.push_back(state.layout()[r]);
  // Rotate so the first factor's pivot amplitude is real and positive.
  const Complex phase = p / std::abs(p);
  StateBuilder build_a(std::move(layout_a)), build_b(std::move(layout_b));
  for (const auto& [key, idx] : rows) {
    if (alpha[idx] != Complex{}) build_a.add(key, alpha[idx] / phase);
  }
  for (const auto& [key, idx] : cols) {
    if (beta[idx] != Complex{}) build_b.add(key, beta[idx] * phase);
  }
  return std::make_pair(build_a.build(true), build_b.build(true));
}

bool factor_check(const QState& state, std::span<const std::size_t> first) {
  return factorize(state, first).has_value();
}

void dump(const QState& state, std::ostream& out, bool canonical_phase) {
  Complex rotate{1.0, 0.0};
  if (canonical_phase && state.size() > 0) {
    const Complex a0 = state.amplitude(0);
    rotate = std::conj(a0) / std::abs(a0);
  }
  auto clean = [](double x) { return std::abs(x) < 5e-13 ? 0.0 : x; };
  char buf[64];
  for (std::size_t i = 0; i < state.size(); ++i) {
    auto l = state.label(i);
    for (std::size_t r = 0; r < state.width(); ++r) {
      const Register& reg = state.layout()[r];
      if (reg.kind == RegisterKind::group) {
        out << to_hex(Encoding{l[r]}, static_cast<unsigned>(reg.size));
      } else {
        out << l[r];
      }
      out << ' ';
    }
    const Complex a = state.amplitude(i) * rotate;
    std::snprintf(buf, sizeof buf, "%.12f %.12f", clean(a.real()), clean(a.imag()));
    out << buf << '\n';
  }
}

std::string dump_string(const QState& state, bool canonical_phase) {
  std::ostringstream out;
  dump(state, out, canonical_phase);
  return out.str();
}

}  // namespace solvq::qsim
