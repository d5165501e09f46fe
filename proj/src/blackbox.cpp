#include "solvq/blackbox.hpp"

#include <bit>
#include <cctype>

#include "solvq/errors.hpp"

namespace solvq {
namespace {

std::atomic<std::uint64_t> g_invalid_queries{0};

std::uint64_t mask_for(unsigned n) { return n >= 64 ? ~0ULL : ((1ULL << n) - 1); }

}  // namespace

std::uint64_t global_invalid_query_count() { return g_invalid_queries.load(); }

std::string to_hex(Encoding e, unsigned encoding_length) {
  static constexpr char kDigits[] = "0123456789abcdef";
  const unsigned digits = std::max(1u, (encoding_length + 3) / 4);
  std::string out(digits, '0');
  std::uint64_t v = e.bits;
  for (unsigned i = 0; i < digits; ++i) {
    out[digits - 1 - i] = kDigits[v & 0xF];
    v >>= 4;
  }
  return out;
}

Encoding parse_hex(std::string_view text, unsigned encoding_length) {
  if (text.starts_with("0x") || text.starts_with("0X")) text.remove_prefix(2);
  if (text.empty()) throw InvalidEncoding("empty element literal");
  std::uint64_t value = 0;
  for (char c : text) {
    int digit;
    if (c >= '0' && c <= '9') {
      digit = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      digit = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      digit = c - 'A' + 10;
    } else {
      throw InvalidEncoding("'" + std::string(text) + "' is not a hex literal");
    }
    if (value >> 60) throw InvalidEncoding("element literal too long");
    value = (value << 4) | static_cast<std::uint64_t>(digit);
  }
  if ((value & ~mask_for(encoding_length)) != 0) {
    throw InvalidEncoding("element literal '" + std::string(text) + "' exceeds " +
                          std::to_string(encoding_length) + " bits");
  }
  return Encoding{value};
}

GroupOracle::GroupOracle(std::shared_ptr<const detail::GroupFamily> family)
    : family_(std::move(family)), counters_(std::make_shared<detail::QueryCounters>()) {}

bool GroupOracle::is_valid(Encoding e) const {
  if ((e.bits & ~mask_for(encoding_length())) != 0) return false;
  return family_->is_valid(e);
}

void GroupOracle::require_valid(Encoding e, const char* op) const {
  if (is_valid(e)) return;
  counters_->invalid.fetch_add(1, std::memory_order_relaxed);
  g_invalid_queries.fetch_add(1, std::memory_order_relaxed);
  throw InvalidEncoding(std::string(op) + ": '" + hex(e) + "' is not a valid element of " +
                        describe());
}

Encoding GroupOracle::multiply(Encoding g, Encoding h) const {
  require_valid(g, "multiply");
  require_valid(h, "multiply");
  counters_->multiply.fetch_add(1, std::memory_order_relaxed);
  return family_->multiply(g, h);
}

Encoding GroupOracle::inverse(Encoding g) const {
  require_valid(g, "inverse");
  counters_->inverse.fetch_add(1, std::memory_order_relaxed);
  return family_->inverse(g);
}

Encoding GroupOracle::power(Encoding g, std::int64_t a) const {
  require_valid(g, "power");
  if (a == 0) return identity();
  Encoding base = a < 0 ? inverse(g) : g;
  // Magnitude without overflow for INT64_MIN.
  std::uint64_t e = a < 0 ? (~static_cast<std::uint64_t>(a) + 1) : static_cast<std::uint64_t>(a);
  Encoding result = identity();
  bool first = true;
  while (e != 0) {
    if (e & 1) {
      result = first ? base : multiply(result, base);
      first = false;
    }
    e >>= 1;
    if (e != 0) base = multiply(base, base);
  }
  return result;
}

std::uint64_t GroupOracle::query_count() const {
  return counters_->multiply.load(std::memory_order_relaxed) +
         counters_->inverse.load(std::memory_order_relaxed);
}

std::uint64_t GroupOracle::invalid_query_count() const {
  return counters_->invalid.load(std::memory_order_relaxed);
}

Encoding GroupOracle::parse(std::string_view text) const {
  return parse_hex(text, encoding_length());
}

}  // namespace solvq
