#include "solvq/smith.hpp"

#include <stdexcept>
#include <utility>

namespace solvq::smith {
namespace {

// Invariant maintained by every helper: B = U * S * V.
struct Reducer {
  IntMatrix u, s, v;
  std::size_t rows, cols;

  // row i += c * row j of S; U absorbs the inverse as a column operation.
  void add_row(std::size_t i, std::size_t j, const Integer& c) {
    for (std::size_t x = 0; x < cols; ++x) s[i][x] += c * s[j][x];
    for (std::size_t x = 0; x < rows; ++x) u[x][j] -= c * u[x][i];
  }
  // column i += c * column j of S; V absorbs the inverse as a row operation.
  void add_col(std::size_t i, std::size_t j, const Integer& c) {
    for (std::size_t x = 0; x < rows; ++x) s[x][i] += c * s[x][j];
    for (std::size_t x = 0; x < cols; ++x) v[j][x] -= c * v[i][x];
  }
  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    std::swap(s[i], s[j]);
    for (std::size_t x = 0; x < rows; ++x) std::swap(u[x][i], u[x][j]);
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t x = 0; x < rows; ++x) std::swap(s[x][i], s[x][j]);
    std::swap(v[i], v[j]);
  }
  void negate_row(std::size_t i) {
    for (std::size_t x = 0; x < cols; ++x) s[i][x] = -s[i][x];
    for (std::size_t x = 0; x < rows; ++x) u[x][i] = -u[x][i];
  }

  // Moves the smallest nonzero entry of the trailing block to (t, t).
  bool place_pivot(std::size_t t) {
    std::size_t bi = rows, bj = cols;
    for (std::size_t i = t; i < rows; ++i) {
      for (std::size_t j = t; j < cols; ++j) {
        if (s[i][j] == 0) continue;
        if (bi == rows || abs(s[i][j]) < abs(s[bi][bj])) {
          bi = i;
          bj = j;
        }
      }
    }
    if (bi == rows) return false;
    swap_rows(t, bi);
    swap_cols(t, bj);
    return true;
  }

  void reduce(std::size_t t) {
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        const Integer q = s[i][t] / s[t][t];
        if (q != 0) add_row(i, t, -q);
        if (s[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        const Integer q = s[t][j] / s[t][t];
        if (q != 0) add_col(j, t, -q);
        if (s[t][j] != 0) clean = false;
      }
      if (!clean) {
        // A nonzero remainder is smaller than the pivot.
        place_pivot(t);
        continue;
      }
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (s[i][j] % s[t][t] != 0) {
            add_row(t, i, 1);
            divides = false;
            break;
          }
        }
      }
      if (divides) break;
    }
    if (s[t][t] < 0) negate_row(t);
  }
};

}  // namespace

IntMatrix identity(std::size_t n) {
  IntMatrix m(n, std::vector<Integer>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t inner = b.size();
  const std::size_t cols = inner == 0 ? 0 : b[0].size();
  IntMatrix out(a.size(), std::vector<Integer>(cols, 0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != inner) throw std::invalid_argument("matrix shapes do not match");
    for (std::size_t x = 0; x < inner; ++x) {
      if (a[i][x] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][x] * b[x][j];
    }
  }
  return out;
}

SnfResult smith_normal_form(const IntMatrix& b) {
  if (b.empty() || b[0].empty()) throw std::invalid_argument("smith_normal_form needs a nonempty matrix");
  const std::size_t rows = b.size(), cols = b[0].size();
  for (const auto& row : b) {
    if (row.size() != cols) throw std::invalid_argument("ragged matrix");
  }
  Reducer r{identity(rows), b, identity(cols), rows, cols};
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    if (!r.place_pivot(t)) break;
    r.reduce(t);
  }
  SnfResult result{std::move(r.u), std::move(r.s), std::move(r.v), {}};
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    if (result.s[t][t] != 0) result.divisors.push_back(result.s[t][t]);
  }
  return result;
}

}  // namespace solvq::smith
