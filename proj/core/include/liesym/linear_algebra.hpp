#pragma once

#include <optional>
#include <vector>

#include "liesym/expression.hpp"

namespace liesym {

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;  // row-major

// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> row_reduce(RationalMatrix& a);
std::size_t rank(RationalMatrix a);
// Basis of {x : a x = 0}; `columns` is needed when `a` has no rows.
std::vector<RationalVector> nullspace(RationalMatrix a, std::size_t columns);
// Some x with a x = b, or nullopt when inconsistent.
std::optional<RationalVector> solve(RationalMatrix a, const RationalVector& b);

using ExpressionMatrix = std::vector<std::vector<Expression>>;

/// Unique solution of a x = b over the field of rational expressions, with
/// `is_nonzero` deciding pivots. Returns nullopt when the system is singular.
std::optional<std::vector<Expression>> solve(ExpressionMatrix a, std::vector<Expression> b,
                                             const std::function<bool(const Expression&)>& is_nonzero);

}  // namespace liesym
