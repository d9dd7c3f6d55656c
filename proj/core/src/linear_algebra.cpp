#include "liesym/linear_algebra.hpp"

#include "liesym/errors.hpp"

namespace liesym {

std::vector<std::size_t> row_reduce(RationalMatrix& a) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  std::size_t cols = a[0].size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    std::size_t p = row;
    while (p < a.size() && a[p][col] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[row]);
    Rational inv = 1 / a[row][col];
    for (auto& v : a[row]) v *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][col] == 0) continue;
      Rational f = a[r][col];
      for (std::size_t c = col; c < cols; ++c) a[r][c] -= f * a[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t rank(RationalMatrix a) { return row_reduce(a).size(); }

std::vector<RationalVector> nullspace(RationalMatrix a, std::size_t columns) {
  for (const auto& r : a) {
    if (r.size() != columns) throw Error("nullspace: ragged matrix");
  }
  auto pivots = row_reduce(a);
  std::vector<bool> is_pivot(columns, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<RationalVector> basis;
  for (std::size_t free = 0; free < columns; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(columns, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RationalVector> solve(RationalMatrix a, const RationalVector& b) {
  if (a.size() != b.size()) throw Error("solve: dimension mismatch");
  std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t r = 0; r < a.size(); ++r) a[r].push_back(b[r]);
  auto pivots = row_reduce(a);
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  RationalVector x(cols, 0);
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = a[i][cols];
  return x;
}

std::optional<std::vector<Expression>> solve(ExpressionMatrix a, std::vector<Expression> b,
                                             const std::function<bool(const Expression&)>& is_nonzero) {
  std::size_t n = b.size();
  if (a.size() != n) throw Error("solve: dimension mismatch");
  std::size_t cols = n == 0 ? 0 : a[0].size();
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols; ++col) {
    std::size_t p = row;
    while (p < n && !is_nonzero(a[p][col])) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[row]);
    std::swap(b[p], b[row]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row || a[r][col].is_zero()) continue;
      Expression f = a[r][col] / a[row][col];
      for (std::size_t c = col; c < cols; ++c) a[r][c] -= f * a[row][c];
      b[r] -= f * b[row];
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (std::size_t r = row; r < n; ++r) {
    if (is_nonzero(b[r])) return std::nullopt;
  }
  std::vector<Expression> x(cols);
  for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = b[i] / a[i][pivot_col[i]];
  return x;
}

}  // namespace liesym
