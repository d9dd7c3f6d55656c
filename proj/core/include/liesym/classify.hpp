#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liesym/catalog.hpp"
#include "liesym/linear_algebra.hpp"

namespace liesym {

/// Tests whether y'' = F is a polynomial of degree <= 3 in p = y'.
/// Throws InapplicableError when p occurs inside a function argument.
bool cubic_in_p_test(const Expression& F);

/// y^(n) + A_{n-1} y^(n-1) + ... + A_0 y = b with m x m coefficient matrices
/// in x. `coefficients[k]` is A_k.
struct LinearSystemSpec {
  int m = 2;
  int n = 2;
  std::vector<ExpressionMatrix> coefficients;
  std::optional<std::vector<Expression>> forcing;

  // y'' + A0 y = 0.
  static LinearSystemSpec second_order(const ExpressionMatrix& a0);
  void validate() const;
  OdeSystem to_system(std::vector<RewriteRule> rules = {}, std::vector<NumericModel> models = {}) const;
};

// Reads a linear system off a solved-form OdeSystem; nullopt when nonlinear.
std::optional<LinearSystemSpec> linear_spec(const OdeSystem& sys);

struct ClassificationVerdict {
  bool in_canonical_class = false;
  std::vector<VectorField> witness;
  std::vector<std::string> witness_names;
  std::string reason;
};

/// For y'' = M y (M = -A_0): whether M - (tr M / m) I vanishes entrywise.
bool isotropy_test(const LinearSystemSpec& spec, const std::vector<RewriteRule>& rules = {},
                   const ZeroTestOptions& options = {});

/// Trace-free normal form y'' = A y + B w, w'' = C y - A w.
OdeSystem trace_free_system(const Expression& A, const Expression& B, const Expression& C);

ClassificationVerdict non_cartan_existence_2x2(const Expression& A, const Expression& B, const Expression& C);

/// Determining system of the trace-free form; `restricted` imposes
/// xi = alpha(x) y + beta(x) w + gamma(x).
DeterminingSystem determining_system_2x2(const Expression& A, const Expression& B, const Expression& C,
                                         bool restricted);

struct TraceFreeReduction {
  bool accepted = false;
  Expression residual;  // -2 (a1 + a4) q^2 + 3 q'^2 - 2 q q''
  ZeroStatus status = ZeroStatus::nonzero;
  // Coefficients of the reduced system, written in x.
  Expression A, B, C;
};

/// Checks the candidate auxiliary function q and, when it passes, returns
/// A = (a1 - a4) / (2 q^2), B = a2 / q^2, C = a3 / q^2 for y'' = M y, M = [[a1, a2], [a3, a4]].
TraceFreeReduction trace_free_reduce(const LinearSystemSpec& spec, const Expression& q,
                                     const std::vector<RewriteRule>& rules = {},
                                     const std::vector<NumericModel>& models = {});

/// Canonical-class membership of a second-order linear system in normal form.
/// Witnesses are the 2m non-Cartan generators, each re-verified.
ClassificationVerdict classify_linear_system(const LinearSystemSpec& spec);

}  // namespace liesym
