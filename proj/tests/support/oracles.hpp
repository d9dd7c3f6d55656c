#pragma once

#include <string>
#include <vector>

#include "liesym/classify.hpp"
#include "liesym/linear_algebra.hpp"

namespace liesym::testing {

// sum of c_k * monomial_k over all monomials in `vars` of total degree <= degree,
// with fresh parameters `<prefix>k` appended to `params`.
Expression polynomial_ansatz(const std::string& prefix, const std::vector<Symbol>& vars, int degree,
                             std::vector<Symbol>& params);

// Rows of the linear system in `params` obtained by requiring every equation
// to vanish identically in `vars`. Equations must be polynomial in `vars` after
// clearing denominators and linear in `params`.
RationalMatrix coefficient_rows(const std::vector<Expression>& equations, const std::vector<Symbol>& vars,
                                const std::vector<Symbol>& params);

// Replaces every application of `name` (any derivative multi-index) by the
// corresponding derivative of `body`, which is written in `vars`.
Expression instantiate(const Expression& e, const std::string& name, const Expression& body,
                       const std::vector<Symbol>& vars);

// pr v (y_j^(n) - F_j) with y^(n) -> F, computed straight from prolong.
std::vector<Expression> on_shell_residuals(const VectorField& v, const OdeSystem& sys);

// Dimension of the space of point symmetries xi = a(x), phi = b(x, y) of y'' = 0
// with polynomial components of degree <= cap.
std::size_t fiber_preserving_dimension_oracle(int cap);

struct RestrictedSearch {
  std::size_t unknowns = 0;
  std::size_t nullity = 0;
  bool non_cartan_found = false;
};

// xi = alpha(x) y + beta(x) w + gamma(x) with alpha, beta, gamma of degree <= 4,
// eta and phi of degree <= 3 in (x, y, w), on y'' = A y + B w, w'' = C y - A w.
RestrictedSearch restricted_ansatz_search(const Expression& A, const Expression& B, const Expression& C,
                                          int xi_degree = 4, int phi_degree = 3);

struct NamedTransformation {
  std::string name;
  PointTransformation t;
};

// x = rho(t), y = pi(t) u + sigma(t).
std::vector<NamedTransformation> equivalence_transformations();
// x = f(z), y = Q w + s(z) with constant Q.
std::vector<NamedTransformation> linear_equivalence_transformations();

struct TripleCase {
  std::string name;
  Expression A, B, C;
};
std::vector<TripleCase> trace_free_corpus();

// Subscript notation ("xi_xw", "A_x", bare A, B, C) rewritten into parser syntax over (x, y, w).
Expression subscript_notation(const std::string& text);

// The fifteen determining equations of the trace-free 2x2 system with a general
// point ansatz (xi, eta, phi), as printed in the reference derivation.
std::vector<Expression> trace_free_reference_block();

// e = c f for a nonzero rational c.
bool proportional(const Expression& e, const Expression& f);

}  // namespace liesym::testing
