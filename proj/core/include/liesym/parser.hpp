#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "liesym/expression.hpp"

namespace liesym {

/// Parsing options.
///
/// `m` is the number of dependent variables, or 0 to accept any index. The
/// aliases are `y` for y1, `w` for y2 (unless m == 1) and `p` for y1' (only
/// when m <= 1). Identifiers followed by an argument list are opaque
/// functions; any other identifier is a parameter.
struct ParseOptions {
  int m = 0;
};

Expression parse(std::string_view text, const ParseOptions& options = {});

struct Equation {
  Expression lhs;
  Expression rhs;
};

// Equations separated by ';'. An entry without '=' means `entry = 0`.
std::vector<Equation> parse_equations(std::string_view text, const ParseOptions& options = {});

/// Reads `expr*dx + expr*dy1 + ...` (also `dy`, `dw`) into its m + 1
/// components, the coefficient of dx first.
std::vector<Expression> parse_field_components(std::string_view text, int m);

}  // namespace liesym
