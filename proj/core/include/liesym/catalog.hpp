#pragma once

#include <string>
#include <utility>
#include <vector>

#include "liesym/symmetry.hpp"

namespace liesym {

/// y'' + q y = 0 with a solution pair (u, v) of unit Wronskian. q, u and v
/// are expressions in x; opaque ones come with their rewrite rules.
struct SourceEquation {
  Expression q;
  Expression u;
  Expression v;
  std::vector<RewriteRule> rules;
  std::vector<NumericModel> models;

  // q, u, v all opaque.
  static SourceEquation symbolic();
  // Given q in x; u, v opaque.
  static SourceEquation with_potential(const Expression& q);
  // q = 0, u = 1, v = x.
  static SourceEquation trivial();

  Expression q_at(const Expression& argument) const;
  Expression u_at(const Expression& argument) const;
  Expression v_at(const Expression& argument) const;
  // Derivative of u (k = 1) or v (k = 2) with respect to x.
  Expression du(int k) const;

  // Reduction with all rules, the Wronskian elimination included.
  Expression reduce(const Expression& e) const;
  ZeroTestOptions zero_options(std::uint64_t seed = 0) const;
};

std::vector<std::string> free_fall_names();
// S1, S2, F_z, F_m, F_p, H, C1, C2.
std::vector<VectorField> free_fall_symmetries();
OdeSystem free_fall_system();

// s_k = u^(n-1-k) v^k for k = 0..n-1.
std::vector<Expression> source_solution_basis(const SourceEquation& src, int n);

struct NormalFormCoefficients {
  int n = 2;
  std::vector<Expression> coeffs;  // A_n^2 .. A_n^n
};

NormalFormCoefficients normal_form_coeffs(const SourceEquation& src, int n);

// y_i^(n) + sum_j A_n^j y_i^(n-j) = 0 for i = 1..m.
OdeSystem isotropic_system(const SourceEquation& src, int m, int n);

// H_ij, S_kj, F_p, F_m, F_z: m^2 + n m + 3 fields.
std::vector<VectorField> canonical_basis(int m, int n, const SourceEquation& src);
std::vector<std::string> canonical_basis_names(int m, int n);

// C_ik = y_i u_k dx + sum_j y_i y_j u_k' dy_j, ordered (i, k).
std::vector<VectorField> non_cartan_generators(int m, const SourceEquation& src);
std::vector<std::string> non_cartan_names(int m);
std::pair<VectorField, VectorField> scalar_non_cartan(const SourceEquation& src);

/// Omega = r d/dx + s.
struct IterativeOperator {
  Expression r;
  Expression s;
  int order_cap = kDefaultMaxProlongation;
};

// Coefficients c_0..c_n of Omega^n[y] = sum_k c_k y^(k).
std::vector<Expression> iterative_coefficients(const IterativeOperator& op, int n);
// Omega^n[y] = 0 solved for y^(n).
OdeSystem iterative_power(const IterativeOperator& op, int n);
// The s that removes the y^(n-1) term of Omega^n[y].
Expression normalize_s(const Expression& r, int n);

/// z = v/u, w = lambda y u^(1-n), with inverse x -> X(x), y -> u(X(x))^(n-1) y / lambda
/// where X is the opaque inverse of v/u.
PointTransformation reduction_transformation(const SourceEquation& src, int n, const Expression& lambda);

// y'' = (p/y)^3 H(x - y/p), p = y'.
OdeSystem non_cartan_family(const std::string& function = "H");
// y'' = p^3 (p (x+1) - y) / (y^3 (y - x p)).
OdeSystem nonlinear_counterexample();

// p^2 F_p - y F_x - 3 p F with p = y': the on-shell invariance residual of y dx for y'' = F.
Expression c1_symmetry_pde_residual(const Expression& F);

}  // namespace liesym
