#pragma once

// Exact Smith normal form over the integers.

#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace solvq::smith {

using Integer = boost::multiprecision::cpp_int;
/// Row-major; every row has the same length.
using IntMatrix = std::vector<std::vector<Integer>>;

struct SnfResult {
  /// B = U * S * V with U, V unimodular.
  IntMatrix u, s, v;
  /// Nonzero diagonal entries of S, positive, each dividing the next.
  std::vector<Integer> divisors;
};

SnfResult smith_normal_form(const IntMatrix& b);

IntMatrix identity(std::size_t n);
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);

}  // namespace solvq::smith
