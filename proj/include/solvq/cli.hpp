#pragma once

// Command-line front end. `run` is the whole program minus process setup so
// tests can drive it in-process.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace solvq::cli {

inline constexpr std::uint64_t kDefaultSeed = 1729;
inline constexpr double kDefaultEpsilon = 0.05;

enum ExitCode : int {
  kOk = 0,
  kNegative = 1,
  kUsage = 2,
  kNotSolvable = 3,
  kBudget = 4,
};

/// `args[0]` is the program name. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace solvq::cli
