#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liesym/jet.hpp"
#include "liesym/parser.hpp"
#include "liesym/rewrite.hpp"
#include "liesym/zero_test.hpp"

namespace liesym {

/// y_j^(n) = F_j for j = 1..m, with side relations for the opaque functions
/// the right-hand sides mention.
struct OdeSystem {
  JetContext ctx;
  std::vector<Expression> rhs;
  std::vector<RewriteRule> rules;
  // Concrete stand-ins used by the numeric fallback of the zero test.
  std::vector<NumericModel> models;

  OdeSystem(JetContext ctx, std::vector<Expression> rhs, std::vector<RewriteRule> rules = {},
            std::vector<NumericModel> models = {});

  ZeroTestOptions zero_options(std::uint64_t seed = 0) const;
};

/// Solves each equation for its unique top-order jet. `m` = 0 infers the
/// dimension from the highest dependent index.
OdeSystem system_from_equations(const std::vector<Equation>& equations, int m = 0);
OdeSystem parse_system(std::string_view text, int m = 0);

struct InvarianceReport {
  std::vector<Expression> residuals;  // display form, before zero-test-only rules
  std::vector<ZeroTestResult> tests;
  bool all_zero() const;
};

/// v^(n)(y_j^(n) - F_j) on y^(n) = F, one entry per equation.
InvarianceReport invariance_residual(const VectorField& v, const OdeSystem& sys, std::uint64_t seed = 0);

using ResidualMonomial = std::pair<std::size_t, Monomial>;

struct ResidualMonomialLess {
  bool operator()(const ResidualMonomial& a, const ResidualMonomial& b) const {
    if (a.first != b.first) return a.first < b.first;
    return compare(a.second, b.second) > 0;
  }
};

struct DeterminingSystem {
  std::vector<Symbol> unknowns;    // underived heads of the ansatz functions
  std::vector<Expression> equations;
  // (residual index, monomial in positive-order jets) -> equation index.
  std::map<ResidualMonomial, std::size_t, ResidualMonomialLess> monomial_index;
};

/// Collects the on-shell residuals of `ansatz` over the positive-order jets.
DeterminingSystem determining_equations(const OdeSystem& sys, const VectorField& ansatz);

// Generic ansatz: xi and phi_j opaque functions of (x, y_1..y_m).
VectorField general_ansatz(const JetContext& ctx, const std::vector<std::string>& names);

VectorField commutator(const VectorField& v, const VectorField& w);

// xi depends on a dependent variable.
bool is_non_cartan(const VectorField& v);

/// z = psi(x, y) given in the old coordinates, with the inverse written in the
/// new ones. New and old coordinates share the symbols x, y_1..y_m.
struct PointTransformation {
  Expression new_independent;               // psi_0
  std::vector<Expression> new_dependents;   // psi_1..psi_m
  std::optional<Bindings> inverse;          // x -> ..., y_j -> ... in new coordinates
  std::vector<RewriteRule> rules;           // relations between the functions involved
  std::vector<NumericModel> models;
  // Functions whose inverse is not available in closed form; the identity
  // check is skipped for compositions that involve them.
  std::vector<std::string> opaque_inverses;
};

/// psi_* v expressed in the new coordinates. Throws when the inverse is
/// missing or fails the forward-then-inverse identity check.
VectorField change_coordinates(const VectorField& v, const PointTransformation& t);

struct LieAlgebraReport {
  std::vector<VectorField> basis;
  bool independent = false;
  std::size_t rank = 0;
  // c[i][j][k]: [e_i, e_j] = sum_k c[i][j][k] e_k, when the bracket is in the span.
  std::vector<std::vector<std::optional<std::vector<Rational>>>> structure_constants;
  bool closed = false;  // every bracket lies in the span
  bool abelian = false;
  std::size_t non_cartan_count = 0;
};

/// Linear independence over the rationals and structure constants. Brackets
/// are reduced with `rules` before comparison.
LieAlgebraReport algebra_report(const std::vector<VectorField>& fields, const std::vector<RewriteRule>& rules = {});

}  // namespace liesym
