// Concrete group families. Every family maps elements to the minimal number of
// bits its encoding rule needs; the rules are spelled out in docs/FORMATS.md.

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <sstream>

#include "solvq/blackbox.hpp"
#include "solvq/errors.hpp"

namespace solvq {
namespace {

using detail::GroupFamily;

unsigned bits_for_count(std::uint64_t count) {
  // Width needed to write the indices 0..count-1; never below one bit.
  return count <= 1 ? 1u : static_cast<unsigned>(std::bit_width(count - 1));
}

class CyclicGroup final : public GroupFamily {
 public:
  explicit CyclicGroup(std::uint64_t q) : q_(q) {
    if (q == 0) throw BadSpec("cyclic(q) needs q >= 1");
    if (q > (1ULL << 62)) throw BadSpec("cyclic order too large");
  }
  unsigned encoding_length() const override { return bits_for_count(q_); }
  Encoding identity() const override { return {0}; }
  bool is_valid(Encoding e) const override { return e.bits < q_; }
  Encoding multiply(Encoding g, Encoding h) const override { return {(g.bits + h.bits) % q_}; }
  Encoding inverse(Encoding g) const override { return {(q_ - g.bits) % q_}; }
  std::vector<Encoding> standard_generators() const override {
    if (q_ == 1) return {};
    return {Encoding{1}};
  }
  std::string describe() const override { return "cyclic(" + std::to_string(q_) + ")"; }

 private:
  std::uint64_t q_;
};

// r^a s^f is stored as (f << w) | a.
class DihedralGroup final : public GroupFamily {
 public:
  explicit DihedralGroup(std::uint64_t q) : q_(q), w_(bits_for_count(q)) {
    if (q == 0) throw BadSpec("dihedral(q) needs q >= 1");
    if (q > (1ULL << 40)) throw BadSpec("dihedral order too large");
  }
  unsigned encoding_length() const override { return w_ + 1; }
  Encoding identity() const override { return {0}; }
  bool is_valid(Encoding e) const override { return rotation(e) < q_; }
  Encoding multiply(Encoding g, Encoding h) const override {
    const std::uint64_t a = flip(g) ? (rotation(g) + q_ - rotation(h)) % q_
                                    : (rotation(g) + rotation(h)) % q_;
    return make(a, flip(g) ^ flip(h));
  }
  Encoding inverse(Encoding g) const override {
    if (flip(g)) return g;
    return make((q_ - rotation(g)) % q_, 0);
  }
  std::vector<Encoding> standard_generators() const override {
    std::vector<Encoding> gens;
    if (q_ > 1) gens.push_back(make(1, 0));
    gens.push_back(make(0, 1));
    return gens;
  }
  std::string describe() const override { return "dihedral(" + std::to_string(q_) + ")"; }

 private:
  std::uint64_t rotation(Encoding e) const { return e.bits & ((1ULL << w_) - 1); }
  std::uint64_t flip(Encoding e) const { return (e.bits >> w_) & 1; }
  Encoding make(std::uint64_t a, std::uint64_t f) const { return {(f << w_) | a}; }

  std::uint64_t q_;
  unsigned w_;
};

// (sign << 2) | unit with unit 0,1,2,3 = 1,i,j,k and sign 1 meaning negative.
class Quaternion8 final : public GroupFamily {
 public:
  unsigned encoding_length() const override { return 3; }
  Encoding identity() const override { return {0}; }
  bool is_valid(Encoding e) const override { return e.bits < 8; }
  Encoding multiply(Encoding g, Encoding h) const override {
    // kUnit[x][y] = unit of x*y, kSign[x][y] = 1 when x*y carries a minus sign.
    static constexpr std::uint64_t kUnit[4][4] = {
        {0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static constexpr std::uint64_t kSign[4][4] = {
        {0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    const std::uint64_t x = g.bits & 3, y = h.bits & 3;
    const std::uint64_t sign = (g.bits >> 2) ^ (h.bits >> 2) ^ kSign[x][y];
    return {(sign << 2) | kUnit[x][y]};
  }
  Encoding inverse(Encoding g) const override {
    if ((g.bits & 3) == 0) return g;
    return {g.bits ^ 4};
  }
  std::vector<Encoding> standard_generators() const override { return {Encoding{1}, Encoding{2}}; }
  std::string describe() const override { return "quaternion8"; }
};

// Permutations of {0..t-1} in one-line form, encoded by their Lehmer-code
// rank. Composition applies the right factor first: (gh)(x) = g(h(x)).
class SymmetricGroup final : public GroupFamily {
 public:
  explicit SymmetricGroup(std::uint64_t t) : t_(static_cast<unsigned>(t)) {
    if (t == 0 || t > 20) throw BadSpec("symmetric(t) needs 1 <= t <= 20");
    factorial_.assign(t_ + 1, 1);
    for (unsigned i = 1; i <= t_; ++i) factorial_[i] = factorial_[i - 1] * i;
  }
  unsigned encoding_length() const override { return bits_for_count(factorial_[t_]); }
  Encoding identity() const override { return {0}; }
  bool is_valid(Encoding e) const override { return e.bits < factorial_[t_]; }
  Encoding multiply(Encoding g, Encoding h) const override {
    const auto pg = unrank(g), ph = unrank(h);
    Perm out{};
    for (unsigned x = 0; x < t_; ++x) out[x] = pg[ph[x]];
    return rank(out);
  }
  Encoding inverse(Encoding g) const override {
    const auto p = unrank(g);
    Perm out{};
    for (unsigned x = 0; x < t_; ++x) out[p[x]] = static_cast<std::uint8_t>(x);
    return rank(out);
  }
  std::vector<Encoding> standard_generators() const override {
    if (t_ < 2) return {};
    Perm swap{}, cycle{};
    for (unsigned x = 0; x < t_; ++x) {
      swap[x] = static_cast<std::uint8_t>(x);
      cycle[x] = static_cast<std::uint8_t>((x + 1) % t_);
    }
    std::swap(swap[0], swap[1]);
    if (t_ == 2) return {rank(swap)};
    return {rank(swap), rank(cycle)};
  }
  std::string describe() const override { return "symmetric(" + std::to_string(t_) + ")"; }

 private:
  using Perm = std::array<std::uint8_t, 20>;

  Encoding rank(const Perm& p) const {
    std::uint64_t r = 0;
    for (unsigned i = 0; i < t_; ++i) {
      std::uint64_t smaller = 0;
      for (unsigned j = i + 1; j < t_; ++j) smaller += p[j] < p[i];
      r += smaller * factorial_[t_ - 1 - i];
    }
    return {r};
  }

  Perm unrank(Encoding e) const {
    Perm p{};
    std::array<bool, 20> used{};
    std::uint64_t r = e.bits;
    for (unsigned i = 0; i < t_; ++i) {
      std::uint64_t digit = r / factorial_[t_ - 1 - i];
      r %= factorial_[t_ - 1 - i];
      for (unsigned v = 0; v < t_; ++v) {
        if (used[v]) continue;
        if (digit == 0) {
          p[i] = static_cast<std::uint8_t>(v);
          used[v] = true;
          break;
        }
        --digit;
      }
    }
    return p;
  }

  unsigned t_;
  std::vector<std::uint64_t> factorial_;
};

// Upper unitriangular dim x dim matrices over F_p. The strictly upper entries
// are packed row-major, first entry in the most significant field.
class UnitriangularGroup final : public GroupFamily {
 public:
  UnitriangularGroup(std::uint64_t dim, std::uint64_t p) : dim_(static_cast<unsigned>(dim)), p_(p) {
    if (dim == 0 || dim > 16) throw BadSpec("unitriangular(dim, p) needs 1 <= dim <= 16");
    if (p < 2) throw BadSpec("unitriangular(dim, p) needs a prime p");
    if (p >= (1ULL << 31)) throw BadSpec("unitriangular(dim, p): p too large");
    for (std::uint64_t d = 2; d * d <= p; ++d) {
      if (p % d == 0) throw BadSpec("unitriangular(dim, p): p = " + std::to_string(p) + " is not prime");
    }
    entries_ = dim_ * (dim_ - 1) / 2;
    field_bits_ = static_cast<unsigned>(std::bit_width(p - 1));
    if (static_cast<std::uint64_t>(entries_) * field_bits_ > 64) {
      throw BadSpec("unitriangular encoding exceeds 64 bits");
    }
  }
  unsigned encoding_length() const override { return std::max(1u, entries_ * field_bits_); }
  Encoding identity() const override { return {0}; }
  bool is_valid(Encoding e) const override {
    if (entries_ == 0) return e.bits == 0;
    for (unsigned k = 0; k < entries_; ++k) {
      if (field(e, k) >= p_) return false;
    }
    return true;
  }
  Encoding multiply(Encoding g, Encoding h) const override {
    const auto a = unpack(g), b = unpack(h);
    Matrix c{};
    for (unsigned i = 0; i < dim_; ++i) {
      for (unsigned j = i + 1; j < dim_; ++j) {
        std::uint64_t sum = (a[i][j] + b[i][j]) % p_;
        for (unsigned l = i + 1; l < j; ++l) sum = (sum + a[i][l] * b[l][j]) % p_;
        c[i][j] = sum;
      }
    }
    return pack(c);
  }
  Encoding inverse(Encoding g) const override {
    // Back substitution for X with A X = I, X upper unitriangular.
    const auto a = unpack(g);
    Matrix x{};
    for (unsigned j = 0; j < dim_; ++j) {
      for (unsigned ii = j; ii-- > 0;) {
        std::uint64_t sum = a[ii][j];
        for (unsigned l = ii + 1; l < j; ++l) sum = (sum + a[ii][l] * x[l][j]) % p_;
        x[ii][j] = (p_ - sum % p_) % p_;
      }
    }
    return pack(x);
  }
  std::vector<Encoding> standard_generators() const override {
    std::vector<Encoding> gens;
    for (unsigned i = 0; i + 1 < dim_; ++i) {
      Matrix m{};
      m[i][i + 1] = 1;
      gens.push_back(pack(m));
    }
    return gens;
  }
  std::string describe() const override {
    return "unitriangular(" + std::to_string(dim_) + ", " + std::to_string(p_) + ")";
  }

 private:
  using Matrix = std::array<std::array<std::uint64_t, 16>, 16>;

  unsigned shift_of(unsigned k) const { return (entries_ - 1 - k) * field_bits_; }
  std::uint64_t field(Encoding e, unsigned k) const {
    return (e.bits >> shift_of(k)) & ((1ULL << field_bits_) - 1);
  }
  Matrix unpack(Encoding e) const {
    Matrix m{};
    unsigned k = 0;
    for (unsigned i = 0; i < dim_; ++i) {
      for (unsigned j = i + 1; j < dim_; ++j) m[i][j] = field(e, k++);
    }
    return m;
  }
  Encoding pack(const Matrix& m) const {
    std::uint64_t bits = 0;
    unsigned k = 0;
    for (unsigned i = 0; i < dim_; ++i) {
      for (unsigned j = i + 1; j < dim_; ++j) bits |= m[i][j] << shift_of(k++);
    }
    return {bits};
  }

  unsigned dim_;
  std::uint64_t p_;
  unsigned entries_ = 0;
  unsigned field_bits_ = 1;
};

class DirectProduct final : public GroupFamily {
 public:
  explicit DirectProduct(std::vector<std::shared_ptr<const GroupFamily>> factors)
      : factors_(std::move(factors)) {
    if (factors_.empty()) throw BadSpec("direct_product needs at least one factor");
    unsigned total = 0;
    for (const auto& f : factors_) total += f->encoding_length();
    if (total > 64) throw BadSpec("direct_product encoding exceeds 64 bits");
    total_ = total;
    // First factor occupies the most significant bits.
    unsigned remaining = total;
    for (const auto& f : factors_) {
      remaining -= f->encoding_length();
      shifts_.push_back(remaining);
    }
  }
  unsigned encoding_length() const override { return total_; }
  Encoding identity() const override {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) bits |= factors_[i]->identity().bits << shifts_[i];
    return {bits};
  }
  bool is_valid(Encoding e) const override {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (!factors_[i]->is_valid(part(e, i))) return false;
    }
    return true;
  }
  Encoding multiply(Encoding g, Encoding h) const override {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      bits |= factors_[i]->multiply(part(g, i), part(h, i)).bits << shifts_[i];
    }
    return {bits};
  }
  Encoding inverse(Encoding g) const override {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      bits |= factors_[i]->inverse(part(g, i)).bits << shifts_[i];
    }
    return {bits};
  }
  std::vector<Encoding> standard_generators() const override {
    std::vector<Encoding> gens;
    const Encoding id = identity();
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const std::uint64_t clear = ~(mask(i) << shifts_[i]);
      for (Encoding g : factors_[i]->standard_generators()) {
        gens.push_back({(id.bits & clear) | (g.bits << shifts_[i])});
      }
    }
    return gens;
  }
  std::string describe() const override {
    std::string out = "direct_product(";
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) out += ", ";
      out += factors_[i]->describe();
    }
    return out + ")";
  }

 private:
  std::uint64_t mask(std::size_t i) const {
    const unsigned w = factors_[i]->encoding_length();
    return w >= 64 ? ~0ULL : ((1ULL << w) - 1);
  }
  Encoding part(Encoding e, std::size_t i) const { return {(e.bits >> shifts_[i]) & mask(i)}; }

  std::vector<std::shared_ptr<const GroupFamily>> factors_;
  std::vector<unsigned> shifts_;
  unsigned total_ = 0;
};

class TableGroup final : public GroupFamily {
 public:
  explicit TableGroup(std::vector<std::vector<std::uint32_t>> table) : table_(std::move(table)) {
    const std::size_t s = table_.size();
    if (s == 0) throw BadSpec("table must be non-empty");
    if (s > (1u << 20)) throw BadSpec("table too large");
    for (const auto& row : table_) {
      if (row.size() != s) throw BadSpec("table must be square");
      std::vector<bool> seen(s, false);
      for (auto v : row) {
        if (v >= s) throw BadSpec("table entry out of range");
        if (seen[v]) throw BadSpec("table rows must be permutations (Latin square)");
        seen[v] = true;
      }
    }
    for (std::size_t j = 0; j < s; ++j) {
      std::vector<bool> seen(s, false);
      for (std::size_t i = 0; i < s; ++i) {
        if (seen[table_[i][j]]) throw BadSpec("table columns must be permutations (Latin square)");
        seen[table_[i][j]] = true;
      }
    }
    bool found = false;
    for (std::size_t e = 0; e < s && !found; ++e) {
      bool ok = true;
      for (std::size_t x = 0; x < s && ok; ++x) ok = table_[e][x] == x && table_[x][e] == x;
      if (ok) {
        identity_ = static_cast<std::uint32_t>(e);
        found = true;
      }
    }
    if (!found) throw BadSpec("table has no identity element");
    check_associative();
    inverse_.assign(s, 0);
    for (std::size_t x = 0; x < s; ++x) {
      for (std::size_t y = 0; y < s; ++y) {
        if (table_[x][y] == identity_) inverse_[x] = static_cast<std::uint32_t>(y);
      }
    }
    pick_generators();
  }

  unsigned encoding_length() const override { return bits_for_count(table_.size()); }
  Encoding identity() const override { return {identity_}; }
  bool is_valid(Encoding e) const override { return e.bits < table_.size(); }
  Encoding multiply(Encoding g, Encoding h) const override { return {table_[g.bits][h.bits]}; }
  Encoding inverse(Encoding g) const override { return {inverse_[g.bits]}; }
  std::vector<Encoding> standard_generators() const override { return generators_; }
  std::string describe() const override { return "table(" + std::to_string(table_.size()) + ")"; }

 private:
  void check_associative() const {
    const std::size_t s = table_.size();
    auto check = [&](std::size_t a, std::size_t b, std::size_t c) {
      if (table_[table_[a][b]][c] != table_[a][table_[b][c]]) {
        throw BadSpec("table is not associative at (" + std::to_string(a) + ", " +
                      std::to_string(b) + ", " + std::to_string(c) + ")");
      }
    };
    if (s <= 64) {
      for (std::size_t a = 0; a < s; ++a)
        for (std::size_t b = 0; b < s; ++b)
          for (std::size_t c = 0; c < s; ++c) check(a, b, c);
      return;
    }
    std::mt19937_64 gen(0x5eed);
    std::uniform_int_distribution<std::size_t> pick(0, s - 1);
    for (int i = 0; i < 100000; ++i) check(pick(gen), pick(gen), pick(gen));
  }

  void pick_generators() {
    const std::size_t s = table_.size();
    std::vector<bool> in_span(s, false);
    in_span[identity_] = true;
    std::vector<std::uint32_t> span{identity_};
    for (std::uint32_t x = 0; x < s; ++x) {
      if (in_span[x]) continue;
      generators_.push_back({x});
      // Re-close the span under right multiplication by all generators.
      for (std::size_t idx = 0; idx < span.size(); ++idx) {
        for (const Encoding g : generators_) {
          const std::uint32_t y = table_[span[idx]][g.bits];
          if (!in_span[y]) {
            in_span[y] = true;
            span.push_back(y);
          }
        }
      }
    }
  }

  std::vector<std::vector<std::uint32_t>> table_;
  std::vector<std::uint32_t> inverse_;
  std::vector<Encoding> generators_;
  std::uint32_t identity_ = 0;
};

std::shared_ptr<const GroupFamily> build_family(const GroupSpec& spec) {
  auto param = [&](std::size_t i) -> std::uint64_t {
    if (i >= spec.params.size()) {
      throw BadSpec(std::string(family_name(spec.family)) + " is missing parameter " + std::to_string(i));
    }
    return spec.params[i];
  };
  switch (spec.family) {
    case GroupFamilyKind::cyclic:
      return std::make_shared<CyclicGroup>(param(0));
    case GroupFamilyKind::dihedral:
      return std::make_shared<DihedralGroup>(param(0));
    case GroupFamilyKind::quaternion8:
      return std::make_shared<Quaternion8>();
    case GroupFamilyKind::symmetric:
      return std::make_shared<SymmetricGroup>(param(0));
    case GroupFamilyKind::unitriangular:
      return std::make_shared<UnitriangularGroup>(param(0), param(1));
    case GroupFamilyKind::direct_product: {
      std::vector<std::shared_ptr<const GroupFamily>> factors;
      for (const auto& f : spec.factors) factors.push_back(build_family(f));
      return std::make_shared<DirectProduct>(std::move(factors));
    }
    case GroupFamilyKind::table:
      return std::make_shared<TableGroup>(spec.table);
  }
  throw BadSpec("unknown group family");
}

}  // namespace

GroupOracle make_oracle(const GroupSpec& spec) { return GroupOracle(build_family(spec)); }

}  // namespace solvq
