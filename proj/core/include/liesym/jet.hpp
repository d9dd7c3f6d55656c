#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "liesym/expression.hpp"

namespace liesym {

/// m dependent variables and a maximal jet order n. Jet symbols of order up
/// to n + 1 are admissible (a total derivative raises the order by one).
struct JetContext {
  int m = 1;
  int order = 2;

  JetContext() = default;
  JetContext(int m_, int order_);

  // Throws ContextMismatchError for jets outside the context.
  void check(const Expression& e) const;
  // y_j^(k) for j = 1..m.
  std::vector<Symbol> jets(int k) const;

  friend bool operator==(const JetContext&, const JetContext&) = default;
};

inline constexpr int kDefaultMaxProlongation = 4;

/// D_x = d/dx + sum over j, k of y_j^(k+1) d/dy_j^(k).
Expression total_derivative(const Expression& e, const JetContext& ctx);

/// xi d/dx + sum_j phi_j d/dy_j with components depending on x and the y_j only.
class VectorField {
 public:
  VectorField(JetContext ctx, Expression xi, std::vector<Expression> phi);
  static VectorField zero(const JetContext& ctx);

  const JetContext& context() const noexcept { return ctx_; }
  const Expression& xi() const noexcept { return xi_; }
  const std::vector<Expression>& phi() const noexcept { return phi_; }
  // Component 0 is xi, component j is phi_j.
  const Expression& component(std::size_t i) const { return i == 0 ? xi_ : phi_.at(i - 1); }
  std::size_t size() const noexcept { return phi_.size() + 1; }
  bool is_zero() const;

  // v(f) = xi f_x + sum_j phi_j f_{y_j}.
  Expression apply(const Expression& f) const;
  // Componentwise map.
  VectorField map(const std::function<Expression(const Expression&)>& fn) const;

  VectorField operator-() const;
  friend VectorField operator+(const VectorField& a, const VectorField& b);
  friend VectorField operator-(const VectorField& a, const VectorField& b);
  friend VectorField operator*(const Expression& c, const VectorField& v);

  friend bool operator==(const VectorField& a, const VectorField& b);

 private:
  JetContext ctx_;
  Expression xi_;
  std::vector<Expression> phi_;
};

// "xi*dx + phi1*dy1 + ..." in the notation accepted by parse_field_components.
std::string to_string(const VectorField& v, const PrintOptions& options);
std::string to_string(const VectorField& v);

struct ProlongedField {
  VectorField base;
  int order = 0;
  // (dependent index j, derivative order k) -> coefficient of d/dy_j^(k).
  std::map<std::pair<int, int>, Expression> coefficients;

  const Expression& coefficient(int j, int k) const { return coefficients.at({j, k}); }
  // Action of the prolonged field on a function of jets of order <= `order`.
  Expression apply(const Expression& f) const;
};

/// phi_j^(k+1) = D_x phi_j^(k) - y_j^(k+1) D_x xi.
ProlongedField prolong(const VectorField& v, int p, int max_order = kDefaultMaxProlongation);

}  // namespace liesym
