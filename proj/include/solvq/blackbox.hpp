#pragma once

// Black-box groups: elements are fixed-length bit strings and all group
// operations go through an oracle that counts its queries.

#include <atomic>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "solvq/group_spec.hpp"

namespace solvq {

/// A group element as seen through the oracle: an n-bit string stored in the
/// low bits of a 64-bit word. n is owned by the oracle that produced it.
struct Encoding {
  std::uint64_t bits = 0;

  friend auto operator<=>(const Encoding&, const Encoding&) = default;
};

struct EncodingHash {
  std::size_t operator()(Encoding e) const noexcept {
    return std::hash<std::uint64_t>{}(e.bits * 0x9E3779B97F4A7C15ULL);
  }
};

/// Hex rendering with exactly ceil(n/4) digits, most significant first.
std::string to_hex(Encoding e, unsigned encoding_length);

/// Parses a hex literal (optional `0x`). Throws InvalidEncoding when the value
/// does not fit in `encoding_length` bits; validity in the group is not checked.
Encoding parse_hex(std::string_view text, unsigned encoding_length);

namespace detail {

// The concrete multiplication rule behind an oracle. Implementations assume
// their inputs are valid; GroupOracle performs the checks.
class GroupFamily {
 public:
  virtual ~GroupFamily() = default;
  virtual unsigned encoding_length() const = 0;
  virtual Encoding identity() const = 0;
  virtual bool is_valid(Encoding e) const = 0;
  virtual Encoding multiply(Encoding g, Encoding h) const = 0;
  virtual Encoding inverse(Encoding g) const = 0;
  virtual std::vector<Encoding> standard_generators() const = 0;
  virtual std::string describe() const = 0;
};

struct QueryCounters {
  std::atomic<std::uint64_t> multiply{0};
  std::atomic<std::uint64_t> inverse{0};
  std::atomic<std::uint64_t> invalid{0};
};

}  // namespace detail

/// Process-wide count of oracle calls rejected for an invalid encoding.
std::uint64_t global_invalid_query_count();

/// Handle to an immutable black-box group. Copies share the group and the
/// query counters; all members are safe to call concurrently.
class GroupOracle {
 public:
  explicit GroupOracle(std::shared_ptr<const detail::GroupFamily> family);

  unsigned encoding_length() const { return family_->encoding_length(); }
  Encoding identity() const { return family_->identity(); }
  bool is_valid(Encoding e) const;

  /// U_G on basis states: returns gh. Throws InvalidEncoding (fail-fast).
  Encoding multiply(Encoding g, Encoding h) const;
  /// Returns g^{-1}. Throws InvalidEncoding.
  Encoding inverse(Encoding g) const;
  /// g^a by repeated squaring; negative exponents go through inverse().
  Encoding power(Encoding g, std::int64_t a) const;

  /// A generating set for the whole group, fixed per family.
  std::vector<Encoding> standard_generators() const {
    return family_->standard_generators();
  }
  std::string describe() const { return family_->describe(); }

  std::uint64_t query_count() const;
  std::uint64_t invalid_query_count() const;

  std::string hex(Encoding e) const { return to_hex(e, encoding_length()); }
  Encoding parse(std::string_view text) const;

  /// Same group, fresh counters.
  GroupOracle with_fresh_counters() const { return GroupOracle(family_); }

 private:
  void require_valid(Encoding e, const char* op) const;

  std::shared_ptr<const detail::GroupFamily> family_;
  std::shared_ptr<detail::QueryCounters> counters_;
};

/// Instantiates the group described by `spec`. Throws BadSpec.
GroupOracle make_oracle(const GroupSpec& spec);

}  // namespace solvq
