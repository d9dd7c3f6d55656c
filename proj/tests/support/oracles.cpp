#include "oracles.hpp"

#include <cmath>
#include <map>
#include <regex>

#include "liesym/errors.hpp"

namespace liesym::testing {
namespace {

Expression X() { return Symbol::independent(); }
Expression Y(int j) { return Symbol::dependent(j); }

void monomials(const std::vector<Symbol>& vars, std::size_t from, int degree, Expression current,
               std::vector<Expression>& out) {
  out.push_back(current);
  if (degree == 0) return;
  for (std::size_t i = from; i < vars.size(); ++i) {
    monomials(vars, i, degree - 1, current * Expression(vars[i]), out);
  }
}

}  // namespace

Expression polynomial_ansatz(const std::string& prefix, const std::vector<Symbol>& vars, int degree,
                             std::vector<Symbol>& params) {
  std::vector<Expression> monos;
  monomials(vars, 0, degree, Expression(1), monos);
  Expression body;
  for (std::size_t k = 0; k < monos.size(); ++k) {
    Symbol c = Symbol::parameter(prefix + std::to_string(k));
    params.push_back(c);
    body += Expression(c) * monos[k];
  }
  return body;
}

RationalMatrix coefficient_rows(const std::vector<Expression>& equations, const std::vector<Symbol>& vars,
                                const std::vector<Symbol>& params) {
  std::map<Symbol, std::size_t> column;
  for (std::size_t i = 0; i < params.size(); ++i) column[params[i]] = i;
  RationalMatrix rows;
  for (const auto& eq : equations) {
    Expression cleared = eq.numerator_expression();
    for (const auto& [mono, coeff] : collect(cleared, vars)) {
      RationalVector row(params.size(), 0);
      for (const auto& [pm, value] : collect(coeff, params)) {
        auto c = value.constant_value();
        if (!c) throw Error("coefficient_rows: coefficient depends on more than the parameters");
        if (pm.empty()) {
          if (*c != 0) throw Error("coefficient_rows: inhomogeneous equation");
          continue;
        }
        if (pm.size() != 1 || pm[0].exponent != 1) throw Error("coefficient_rows: nonlinear in the parameters");
        row[column.at(*Expression(pm[0].atom).as_symbol())] += *c;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

Expression instantiate(const Expression& e, const std::string& name, const Expression& body,
                       const std::vector<Symbol>& vars) {
  return map_atoms(e, [&](const Atom& atom) -> std::optional<Expression> {
    if (!atom.is_application() || atom.head().name() != name) return std::nullopt;
    const auto& d = atom.head().derivatives();
    if (d.size() != vars.size()) throw Error("instantiate: arity mismatch");
    Expression value = body;
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (int k = 0; k < d[i]; ++k) value = differentiate(value, vars[i]);
    }
    Bindings args;
    for (std::size_t i = 0; i < vars.size(); ++i) args[vars[i]] = atom.arguments()[i];
    return substitute_simultaneous(value, args);
  });
}

std::vector<Expression> on_shell_residuals(const VectorField& v, const OdeSystem& sys) {
  const int n = sys.ctx.order;
  ProlongedField pr = prolong(v, n);
  Bindings shell;
  for (int j = 1; j <= sys.ctx.m; ++j) shell[Symbol::jet(j, n)] = sys.rhs[j - 1];
  std::vector<Expression> out;
  for (int j = 1; j <= sys.ctx.m; ++j) {
    Expression eq = Expression(Symbol::jet(j, n)) - sys.rhs[j - 1];
    out.push_back(substitute_simultaneous(pr.apply(eq), shell));
  }
  return out;
}

std::size_t fiber_preserving_dimension_oracle(int cap) {
  const Symbol x = Symbol::independent(), y = Symbol::dependent(1), p = Symbol::jet(1, 1);
  std::vector<Symbol> params;
  Expression a = polynomial_ansatz("a", {x}, cap, params);
  Expression b = polynomial_ansatz("b", {x, y}, cap, params);
  // Second prolongation coefficient on y'' = 0, written out by hand:
  // b_xx + (2 b_xy - a_xx) p + b_yy p^2.
  auto d = [](const Expression& e, const Symbol& s) { return differentiate(e, s); };
  Expression residual = d(d(b, x), x) + (2 * d(d(b, x), y) - d(d(a, x), x)) * Expression(p) +
                        d(d(b, y), y) * Expression(p) * Expression(p);
  RationalMatrix rows = coefficient_rows({residual}, {x, y, p}, params);
  return nullspace(rows, params.size()).size();
}

RestrictedSearch restricted_ansatz_search(const Expression& A, const Expression& B, const Expression& C,
                                          int xi_degree, int phi_degree) {
  const Symbol x = Symbol::independent(), y = Symbol::dependent(1), w = Symbol::dependent(2);
  std::vector<Symbol> params;
  Expression alpha = polynomial_ansatz("al", {x}, xi_degree, params);
  std::size_t alpha_end = params.size();
  Expression beta = polynomial_ansatz("be", {x}, xi_degree, params);
  std::size_t beta_end = params.size();
  Expression gamma = polynomial_ansatz("ga", {x}, xi_degree, params);
  Expression eta = polynomial_ansatz("et", {x, y, w}, phi_degree, params);
  Expression phi = polynomial_ansatz("ph", {x, y, w}, phi_degree, params);

  OdeSystem sys = trace_free_system(A, B, C);
  VectorField v(sys.ctx, alpha * Y(1) + beta * Y(2) + gamma, {eta, phi});
  std::vector<Expression> residuals = on_shell_residuals(v, sys);
  RationalMatrix rows =
      coefficient_rows(residuals, {x, y, w, Symbol::jet(1, 1), Symbol::jet(2, 1)}, params);
  auto basis = nullspace(rows, params.size());

  RestrictedSearch out;
  out.unknowns = params.size();
  out.nullity = basis.size();
  for (const auto& vec : basis) {
    for (std::size_t k = 0; k < beta_end; ++k) {
      if (vec[k] != 0) out.non_cartan_found = true;
    }
  }
  (void)alpha_end;
  return out;
}

std::vector<NamedTransformation> equivalence_transformations() {
  const Symbol kx = Symbol::independent(), ky = Symbol::dependent(1);
  Expression x = X(), y = Y(1);
  std::vector<NamedTransformation> out;
  {
    // rho = t, pi = e^t (opaque with pi' = pi), sigma = 0.
    PointTransformation t;
    Expression pi = Expression::apply("pi", {x});
    t.new_independent = x;
    t.new_dependents = {y / pi};
    t.inverse = Bindings{{kx, x}, {ky, pi * y}};
    t.rules = {RewriteRule(Symbol::function("pi", std::vector<int>{1}), {formal(1)},
                           Expression::apply("pi", {Expression(formal(1))}))};
    NumericModel exp_model{"exp", {}};
    exp_model.functions["pi"] = [](const std::vector<double>& a, const std::vector<int>&) { return std::exp(a[0]); };
    t.models = {exp_model};
    out.push_back({"rho=t, pi=exp, sigma=0", t});
  }
  {
    // rho = 2t + 1, pi = t^2 + 1, sigma = t^3.
    PointTransformation t;
    Expression s = (x - 1) / 2;
    t.new_independent = s;
    t.new_dependents = {(y - pow(s, 3)) / (s * s + 1)};
    t.inverse = Bindings{{kx, 2 * x + 1}, {ky, (x * x + 1) * y + pow(x, 3)}};
    out.push_back({"rho=2t+1, pi=t^2+1, sigma=t^3", t});
  }
  {
    // rho = t/(1+t), pi = 1/(1+t), sigma = t.
    PointTransformation t;
    Expression s = x / (1 - x);
    t.new_independent = s;
    t.new_dependents = {(y - s) * (1 + s)};
    t.inverse = Bindings{{kx, x / (1 + x)}, {ky, y / (1 + x) + x}};
    out.push_back({"rho=t/(1+t), pi=1/(1+t), sigma=t", t});
  }
  return out;
}

std::vector<NamedTransformation> linear_equivalence_transformations() {
  const Symbol kx = Symbol::independent(), ky = Symbol::dependent(1);
  Expression x = X(), y = Y(1);
  std::vector<NamedTransformation> out;
  {
    // x = 2z + 3, y = 5w + z^2.
    PointTransformation t;
    Expression z = (x - 3) / 2;
    t.new_independent = z;
    t.new_dependents = {(y - z * z) / 5};
    t.inverse = Bindings{{kx, 2 * x + 3}, {ky, 5 * y + x * x}};
    out.push_back({"x=2z+3, y=5w+z^2", t});
  }
  {
    // x = z/(1+z), y = -3w + sigma(z).
    PointTransformation t;
    Expression z = x / (1 - x);
    t.new_independent = z;
    t.new_dependents = {(y - Expression::apply("sigma", {z})) / -3};
    t.inverse = Bindings{{kx, x / (1 + x)}, {ky, -3 * y + Expression::apply("sigma", {x})}};
    out.push_back({"x=z/(1+z), y=-3w+sigma(z)", t});
  }
  {
    // x = 1/z, y = 2w + z^3.
    PointTransformation t;
    Expression z = reciprocal(x);
    t.new_independent = z;
    t.new_dependents = {(y - pow(z, 3)) / 2};
    t.inverse = Bindings{{kx, reciprocal(x)}, {ky, 2 * y + pow(x, 3)}};
    out.push_back({"x=1/z, y=2w+z^3", t});
  }
  return out;
}

std::vector<TripleCase> trace_free_corpus() {
  Expression x = X();
  return {
      {"(0,0,0)", 0, 0, 0},
      {"(1,0,0)", 1, 0, 0},
      {"(0,1,0)", 0, 1, 0},
      {"(0,0,1)", 0, 0, 1},
      {"(1,0,2)", 1, 0, 2},
      {"(0,0,-2)", 0, 0, -2},
      {"(x,0,0)", x, 0, 0},
      {"(0,x,1)", 0, x, 1},
      {"(2,3,-1)", 2, 3, -1},
      {"(x^2,1,x)", x * x, 1, x},
  };
}

Expression subscript_notation(const std::string& text) {
  static const std::regex derivative(R"(\b(xi|eta|phi)(_([xyw]+))?\b)");
  static const std::regex coefficient(R"(\b([ABC])(_(x+))?\b)");
  std::string out;
  auto rewrite = [](const std::string& in, const std::regex& re, auto&& fn) {
    std::string result;
    auto begin = std::sregex_iterator(in.begin(), in.end(), re);
    std::size_t last = 0;
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
      result += in.substr(last, static_cast<std::size_t>(it->position()) - last);
      result += fn(*it);
      last = static_cast<std::size_t>(it->position() + it->length());
    }
    return result + in.substr(last);
  };
  out = rewrite(text, derivative, [](const std::smatch& m) {
    std::string subs = m[3].str();
    int cx = 0, cy = 0, cw = 0;
    for (char c : subs) (c == 'x' ? cx : c == 'y' ? cy : cw)++;
    return m[1].str() + "[" + std::to_string(cx) + "," + std::to_string(cy) + "," + std::to_string(cw) + "](x,y,w)";
  });
  out = rewrite(out, coefficient, [](const std::smatch& m) {
    return m[1].str() + std::string(m[3].length(), '\'') + "(x)";
  });
  return parse(out, ParseOptions{2});
}

std::vector<Expression> trace_free_reference_block() {
  const char* lines[] = {
      "xi_ww",
      "xi_yw",
      "xi_yy",
      "eta_ww",
      "phi_yy",
      "phi_ww - 2*xi_xw",
      "2*eta_yw - 2*xi_xw",
      "eta_yy - 2*xi_xy",
      "-2*xi_xy + 2*phi_yw",
      "2*eta_xw - 2*B*w*xi_w - 2*A*y*xi_w",
      "2*A*w*xi_y - 2*C*y*xi_y + 2*phi_xy",
      "-A*eta - B*phi - y*xi*A_x - w*xi*B_x - A*w*eta_w + C*y*eta_w + B*w*eta_y + A*y*eta_y - 2*B*w*xi_x"
      " - 2*A*y*xi_x + eta_xx",
      "3*A*w*xi_w - 3*C*y*xi_w - B*w*xi_y - A*y*xi_y - xi_xx + 2*phi_xw",
      "A*w*xi_w - C*y*xi_w - 3*B*w*xi_y - 3*A*y*xi_y + 2*eta_xy - xi_xx",
      "-C*eta + A*phi + w*xi*A_x - y*xi*C_x + 2*A*w*xi_x - 2*C*y*xi_x - A*w*phi_w + C*y*phi_w + B*w*phi_y"
      " + A*y*phi_y + phi_xx",
  };
  std::vector<Expression> out;
  for (const char* line : lines) out.push_back(subscript_notation(line));
  return out;
}

bool proportional(const Expression& e, const Expression& f) {
  if (e.is_zero() || f.is_zero()) return e.is_zero() && f.is_zero();
  const auto& te = e.numerator().terms();
  const auto& tf = f.numerator().terms();
  if (te.empty() || tf.empty()) return false;
  Rational c = te.front().coefficient / tf.front().coefficient;
  return (e - c * f).is_zero();
}

}  // namespace liesym::testing
