#pragma once

#include <stdexcept>
#include <string>

namespace solvq {

/// Base class of every error raised by the library. `kind()` is the stable
/// name printed in CLI reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define SOLVQ_DEFINE_ERROR(Name)                                        \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& what) : Error(#Name, what) {}      \
  }

SOLVQ_DEFINE_ERROR(InvalidEncoding);
SOLVQ_DEFINE_ERROR(BadSpec);
SOLVQ_DEFINE_ERROR(SizeLimitExceeded);
SOLVQ_DEFINE_ERROR(NotSolvable);
SOLVQ_DEFINE_ERROR(EmptySet);
SOLVQ_DEFINE_ERROR(DomainMismatch);
SOLVQ_DEFINE_ERROR(LayoutMismatch);
SOLVQ_DEFINE_ERROR(InsufficientCopies);
SOLVQ_DEFINE_ERROR(Unverified);
SOLVQ_DEFINE_ERROR(NoCoprimeOutcome);
SOLVQ_DEFINE_ERROR(FactorizationFailed);
SOLVQ_DEFINE_ERROR(BudgetExhausted);
SOLVQ_DEFINE_ERROR(NotNormal);
SOLVQ_DEFINE_ERROR(NotAbelianQuotient);
SOLVQ_DEFINE_ERROR(NotSubgroup);

#undef SOLVQ_DEFINE_ERROR

}  // namespace solvq
