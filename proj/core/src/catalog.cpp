#include "liesym/catalog.hpp"

#include <cmath>

#include "liesym/errors.hpp"
#include "liesym/linear_algebra.hpp"

namespace liesym {

namespace {

const Symbol kX = Symbol::independent();

Expression X() { return Expression(kX); }
Expression Y(int j) { return Expression(Symbol::dependent(j)); }

std::vector<RewriteRule> source_rules(const Expression& q_formal) {
  Expression arg = formal(1);
  auto u = [&](int d) { return Expression::apply(Symbol::function("u", std::vector<int>{d}), {arg}); };
  auto v = [&](int d) { return Expression::apply(Symbol::function("v", std::vector<int>{d}), {arg}); };
  return {
      RewriteRule(Symbol::function("u", std::vector<int>{2}), {formal(1)}, -q_formal * u(0)),
      RewriteRule(Symbol::function("v", std::vector<int>{2}), {formal(1)}, -q_formal * v(0)),
      RewriteRule(Symbol::function("v", std::vector<int>{1}), {formal(1)}, (Expression(1) + u(1) * v(0)) / u(0), true),
  };
}

// u = 1, v = x as stand-ins when q = 0.
NumericModel linear_source_model() {
  NumericModel m{"linear", {}};
  m.functions["u"] = [](const std::vector<double>&, const std::vector<int>& d) { return d[0] == 0 ? 1.0 : 0.0; };
  m.functions["v"] = [](const std::vector<double>& a, const std::vector<int>& d) {
    return d[0] == 0 ? a[0] : (d[0] == 1 ? 1.0 : 0.0);
  };
  return m;
}

FunctionModel atan_model() {
  return [](const std::vector<double>& a, const std::vector<int>& d) {
    if (d[0] == 0) return std::atan(a[0]);
    double x = a[0];
    double h = 1 / (1 + x * x);
    switch (d[0]) {
      case 1:
        return h;
      case 2:
        return -2 * x * h * h;
      case 3:
        return (6 * x * x - 2) * h * h * h;
      default:
        throw Error("atan model supports derivatives up to order 3");
    }
  };
}

}  // namespace

SourceEquation SourceEquation::symbolic() {
  SourceEquation s;
  s.q = Expression::apply("q", {X()});
  s.u = Expression::apply("u", {X()});
  s.v = Expression::apply("v", {X()});
  s.rules = source_rules(Expression::apply("q", {Expression(formal(1))}));
  s.models = {trigonometric_source_model(), rational_source_model()};
  return s;
}

SourceEquation SourceEquation::with_potential(const Expression& q) {
  for (const auto& sym : symbols_of(q)) {
    if (!sym.is_independent() && !sym.is_parameter()) throw Error("potential must be a function of x");
  }
  SourceEquation s;
  s.q = q;
  s.u = Expression::apply("u", {X()});
  s.v = Expression::apply("v", {X()});
  s.rules = source_rules(substitute_simultaneous(q, {{kX, Expression(formal(1))}}));
  if (q.is_zero()) {
    s.models = {linear_source_model()};
  } else if (q == Expression(1)) {
    s.models = {trigonometric_source_model()};
  }
  return s;
}

SourceEquation SourceEquation::trivial() {
  SourceEquation s;
  s.q = Expression();
  s.u = Expression(1);
  s.v = X();
  return s;
}

Expression SourceEquation::q_at(const Expression& a) const { return substitute_simultaneous(q, {{kX, a}}); }
Expression SourceEquation::u_at(const Expression& a) const { return substitute_simultaneous(u, {{kX, a}}); }
Expression SourceEquation::v_at(const Expression& a) const { return substitute_simultaneous(v, {{kX, a}}); }

Expression SourceEquation::du(int k) const {
  if (k != 1 && k != 2) throw Error("du: k must be 1 or 2");
  return apply_rules(differentiate(k == 1 ? u : v, kX), rules);
}

Expression SourceEquation::reduce(const Expression& e) const { return apply_rules(e, rules, true); }

ZeroTestOptions SourceEquation::zero_options(std::uint64_t seed) const {
  ZeroTestOptions o;
  o.seed = seed;
  o.models = models;
  return o;
}

std::vector<std::string> free_fall_names() { return {"S1", "S2", "F_z", "F_m", "F_p", "H", "C1", "C2"}; }

std::vector<VectorField> free_fall_symmetries() {
  JetContext ctx(1, 2);
  Expression x = X(), y = Y(1);
  auto field = [&](Expression xi, Expression phi) { return VectorField(ctx, std::move(xi), {std::move(phi)}); };
  return {
      field(0, 1),
      field(0, x),
      field(2 * x, y),
      field(1, 0),
      field(x * x, x * y),
      field(0, y),
      field(y, 0),
      field(x * y, y * y),
  };
}

OdeSystem free_fall_system() { return OdeSystem(JetContext(1, 2), {Expression()}); }

std::vector<Expression> source_solution_basis(const SourceEquation& src, int n) {
  if (n < 2) throw Error("source_solution_basis needs n >= 2");
  std::vector<Expression> out;
  for (int k = 0; k < n; ++k) out.push_back(pow(src.u, n - 1 - k) * pow(src.v, k));
  return out;
}

NormalFormCoefficients normal_form_coeffs(const SourceEquation& src, int n) {
  if (n < 2) throw Error("normal_form_coeffs needs n >= 2");
  auto basis = source_solution_basis(src, n);
  // derivs[k][d] = d-th derivative of s_k, reduced.
  std::vector<std::vector<Expression>> derivs;
  for (const auto& s : basis) {
    std::vector<Expression> row{src.reduce(s)};
    for (int d = 1; d <= n; ++d) row.push_back(src.reduce(differentiate(row.back(), kX)));
    derivs.push_back(std::move(row));
  }
  ExpressionMatrix a;
  std::vector<Expression> b;
  for (int k = 0; k < n; ++k) {
    std::vector<Expression> row;
    for (int j = 2; j <= n; ++j) row.push_back(derivs[k][n - j]);
    a.push_back(std::move(row));
    b.push_back(-derivs[k][n]);
  }
  auto options = src.zero_options();
  auto nonzero = [&](const Expression& e) { return zero_test(e, src.rules, options).status == ZeroStatus::nonzero; };
  auto solution = solve(a, b, nonzero);
  if (!solution) throw Error("normal-form coefficients: singular linear system");
  NormalFormCoefficients out{n, {}};
  for (auto& c : *solution) {
    Expression r = src.reduce(c);
    for (const auto& f : functions_of(r)) {
      if (f.name() == "u" || f.name() == "v") throw Error("normal-form coefficient is not a differential polynomial in q");
    }
    out.coeffs.push_back(r);
  }
  return out;
}

OdeSystem isotropic_system(const SourceEquation& src, int m, int n) {
  auto coeffs = normal_form_coeffs(src, n).coeffs;
  std::vector<Expression> rhs;
  for (int i = 1; i <= m; ++i) {
    Expression f;
    for (int j = 2; j <= n; ++j) f -= coeffs[static_cast<std::size_t>(j) - 2] * Expression(Symbol::jet(i, n - j));
    rhs.push_back(f);
  }
  return OdeSystem(JetContext(m, n), std::move(rhs), src.rules, src.models);
}

std::vector<VectorField> canonical_basis(int m, int n, const SourceEquation& src) {
  if (m < 1 || n < 2) throw Error("canonical_basis needs m >= 1 and n >= 2");
  JetContext ctx(m, n);
  auto along = [&](int j, const Expression& c) {
    std::vector<Expression> phi(static_cast<std::size_t>(m));
    phi[static_cast<std::size_t>(j) - 1] = c;
    return VectorField(ctx, Expression(), std::move(phi));
  };
  auto radial = [&](const Expression& xi, const Expression& c) {
    std::vector<Expression> phi;
    for (int i = 1; i <= m; ++i) phi.push_back(c * Y(i));
    return VectorField(ctx, xi, std::move(phi));
  };
  std::vector<VectorField> out;
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= m; ++j) out.push_back(along(j, Y(i)));
  }
  for (const auto& s : source_solution_basis(src, n)) {
    for (int j = 1; j <= m; ++j) out.push_back(along(j, s));
  }
  Expression u = src.u, v = src.v, du = src.du(1), dv = src.du(2);
  Expression k(n - 1);
  out.push_back(radial(v * v, k * v * dv));
  out.push_back(radial(-u * u, -k * u * du));
  out.push_back(radial(2 * u * v, k * (u * dv + du * v)));
  return out;
}

std::vector<std::string> canonical_basis_names(int m, int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= m; ++j) out.push_back("H" + std::to_string(i) + std::to_string(j));
  }
  for (int k = 0; k < n; ++k) {
    for (int j = 1; j <= m; ++j) out.push_back("S" + std::to_string(k) + std::to_string(j));
  }
  out.insert(out.end(), {"F_p", "F_m", "F_z"});
  return out;
}

std::vector<VectorField> non_cartan_generators(int m, const SourceEquation& src) {
  if (m < 1) throw Error("non_cartan_generators needs m >= 1");
  JetContext ctx(m, 2);
  std::vector<Expression> uk{src.u, src.v};
  std::vector<Expression> duk{src.du(1), src.du(2)};
  std::vector<VectorField> out;
  for (int i = 1; i <= m; ++i) {
    for (int k = 0; k < 2; ++k) {
      std::vector<Expression> phi;
      for (int j = 1; j <= m; ++j) phi.push_back(Y(i) * Y(j) * duk[static_cast<std::size_t>(k)]);
      out.emplace_back(ctx, Y(i) * uk[static_cast<std::size_t>(k)], std::move(phi));
    }
  }
  return out;
}

std::vector<std::string> non_cartan_names(int m) {
  std::vector<std::string> out;
  for (int i = 1; i <= m; ++i) {
    for (int k = 1; k <= 2; ++k) out.push_back("C" + std::to_string(i) + std::to_string(k));
  }
  return out;
}

std::pair<VectorField, VectorField> scalar_non_cartan(const SourceEquation& src) {
  auto g = non_cartan_generators(1, src);
  return {g[0], g[1]};
}

std::vector<Expression> iterative_coefficients(const IterativeOperator& op, int n) {
  if (n < 1) throw Error("iterative power needs n >= 1");
  if (n > op.order_cap) throw Error("iterative power exceeds the order cap");
  if (op.r.is_zero()) throw Error("iterative operator needs r != 0");
  JetContext ctx(1, n);
  Expression f = Y(1);
  for (int k = 0; k < n; ++k) f = op.r * total_derivative(f, ctx) + op.s * f;
  std::vector<Symbol> jets;
  for (int k = 0; k <= n; ++k) jets.push_back(Symbol::jet(1, k));
  auto parts = collect(f, jets);
  std::vector<Expression> out(static_cast<std::size_t>(n) + 1);
  for (const auto& [mono, c] : parts) {
    if (mono.size() != 1 || mono[0].exponent != 1) throw Error("iterative power is not linear");
    out[static_cast<std::size_t>(mono[0].atom.head().order())] = c;
  }
  return out;
}

OdeSystem iterative_power(const IterativeOperator& op, int n) {
  auto c = iterative_coefficients(op, n);
  Expression rhs;
  for (int k = 0; k < n; ++k) rhs -= c[static_cast<std::size_t>(k)] * Expression(Symbol::jet(1, k));
  return OdeSystem(JetContext(1, n), {rhs / c[static_cast<std::size_t>(n)]});
}

Expression normalize_s(const Expression& r, int n) {
  if (n < 2) throw Error("normalize_s needs n >= 2");
  const std::string name = "__s";
  Expression s = Expression::apply(name, {X()});
  auto c = iterative_coefficients(IterativeOperator{r, s}, n)[static_cast<std::size_t>(n) - 1];
  auto parts = collect(c, std::vector<Atom>{*s.as_atom()});
  Expression a, b;
  for (const auto& [mono, coeff] : parts) {
    if (mentions_function(coeff, name)) throw Error("normalize_s: condition involves derivatives of s");
    if (mono.empty()) {
      b = coeff;
    } else if (mono.size() == 1 && mono[0].exponent == 1) {
      a = coeff;
    } else {
      throw Error("normalize_s: condition is not affine in s");
    }
  }
  if (a.is_zero()) throw Error("normalize_s: degenerate linear condition");
  return -b / a;
}

PointTransformation reduction_transformation(const SourceEquation& src, int n, const Expression& lambda) {
  if (lambda.is_zero()) throw Error("reduction transformation needs lambda != 0");
  if (n < 2) throw Error("reduction transformation needs n >= 2");
  PointTransformation t;
  t.new_independent = src.v / src.u;
  t.new_dependents = {lambda * Y(1) * pow(src.u, 1 - n)};
  t.rules = src.rules;
  t.models = src.models;
  Expression x_of;
  if (src.u == Expression(1) && src.v == X()) {
    x_of = X();
  } else {
    x_of = Expression::apply("X", {X()});
    t.opaque_inverses = {"X"};
    if (src.q == Expression(1) && src.u == Expression::apply("u", {X()})) {
      for (auto& m : t.models) m.functions["X"] = atan_model();
    }
  }
  t.inverse = Bindings{{kX, x_of}, {Symbol::dependent(1), pow(src.u_at(x_of), n - 1) * Y(1) / lambda}};
  return t;
}

OdeSystem non_cartan_family(const std::string& function) {
  Expression x = X(), y = Y(1), p = Expression(Symbol::jet(1, 1));
  Expression rhs = pow(p / y, 3) * Expression::apply(function, {x - y / p});
  return OdeSystem(JetContext(1, 2), {rhs});
}

OdeSystem nonlinear_counterexample() {
  Expression x = X(), y = Y(1), p = Expression(Symbol::jet(1, 1));
  Expression rhs = pow(p, 3) * (p * (x + 1) - y) / (pow(y, 3) * (y - x * p));
  return OdeSystem(JetContext(1, 2), {rhs});
}

Expression c1_symmetry_pde_residual(const Expression& F) {
  Expression y = Y(1), p = Expression(Symbol::jet(1, 1));
  return p * p * differentiate(F, Symbol::jet(1, 1)) - y * differentiate(F, kX) - 3 * p * F;
}

}  // namespace liesym
