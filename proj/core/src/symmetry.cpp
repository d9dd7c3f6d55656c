#include "liesym/symmetry.hpp"

#include <algorithm>

#include "liesym/errors.hpp"
#include "liesym/linear_algebra.hpp"

namespace liesym {

OdeSystem::OdeSystem(JetContext ctx_, std::vector<Expression> rhs_, std::vector<RewriteRule> rules_,
                     std::vector<NumericModel> models_)
    : ctx(ctx_), rhs(std::move(rhs_)), rules(std::move(rules_)), models(std::move(models_)) {
  if (rhs.size() != static_cast<std::size_t>(ctx.m)) {
    throw ContextMismatchError("system needs " + std::to_string(ctx.m) + " right-hand sides");
  }
  for (const auto& f : rhs) {
    ctx.check(f);
    for (const auto& s : symbols_of(f)) {
      if (s.is_jet() && s.order() >= ctx.order) throw Error("right-hand side contains a top-order jet");
    }
  }
}

ZeroTestOptions OdeSystem::zero_options(std::uint64_t seed) const {
  ZeroTestOptions o;
  o.seed = seed;
  o.models = models;
  return o;
}

OdeSystem system_from_equations(const std::vector<Equation>& equations, int m) {
  std::vector<Expression> forms;
  int n = 0, top_index = 0;
  for (const auto& eq : equations) {
    forms.push_back(eq.lhs - eq.rhs);
    for (const auto& s : symbols_of(forms.back())) {
      if (!s.is_jet()) continue;
      n = std::max(n, s.order());
      top_index = std::max(top_index, s.index());
    }
  }
  if (n < 1) throw Error("equations contain no derivatives");
  if (m == 0) m = std::max(top_index, static_cast<int>(equations.size()));
  if (static_cast<int>(equations.size()) != m) {
    throw ContextMismatchError("expected " + std::to_string(m) + " equations, got " +
                               std::to_string(equations.size()));
  }
  std::vector<std::optional<Expression>> rhs(static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < forms.size(); ++i) {
    std::vector<Symbol> tops;
    for (const auto& s : symbols_of(forms[i])) {
      if (s.is_jet() && s.order() == n) tops.push_back(s);
    }
    std::string which = "equation " + std::to_string(i + 1);
    if (tops.size() != 1) throw Error(which + " must contain exactly one derivative of order " + std::to_string(n));
    const Symbol& top = tops[0];
    if (top.index() > m) throw ContextMismatchError(which + " refers to a dependent variable beyond m");
    Collected parts;
    try {
      parts = collect(forms[i], std::vector<Symbol>{top});
    } catch (const NotPolynomialError&) {
      throw Error(which + " is not linear in its top-order derivative");
    }
    Expression a, b;
    for (const auto& [mono, coeff] : parts) {
      if (mono.empty()) {
        b = coeff;
      } else if (mono.size() == 1 && mono[0].exponent == 1) {
        a = coeff;
      } else {
        throw Error(which + " is not linear in its top-order derivative");
      }
    }
    if (a.is_zero()) throw Error(which + " does not determine its top-order derivative");
    auto& slot = rhs[static_cast<std::size_t>(top.index()) - 1];
    if (slot) throw Error("two equations solve for the same derivative");
    slot = -b / a;
  }
  std::vector<Expression> out;
  for (auto& r : rhs) out.push_back(*r);
  return OdeSystem(JetContext(m, n), std::move(out));
}

OdeSystem parse_system(std::string_view text, int m) {
  return system_from_equations(parse_equations(text, ParseOptions{m}), m);
}

bool InvarianceReport::all_zero() const {
  return std::all_of(tests.begin(), tests.end(), [](const ZeroTestResult& t) { return t.status != ZeroStatus::nonzero; });
}

namespace {

Bindings on_shell(const OdeSystem& sys) {
  Bindings b;
  for (int j = 1; j <= sys.ctx.m; ++j) b.emplace(Symbol::jet(j, sys.ctx.order), sys.rhs[static_cast<std::size_t>(j) - 1]);
  return b;
}

std::vector<Expression> raw_residuals(const VectorField& v, const OdeSystem& sys) {
  if (v.context().m != sys.ctx.m) throw ContextMismatchError("vector field and system have different m");
  int n = sys.ctx.order;
  ProlongedField pr = prolong(v, n);
  Bindings shell = on_shell(sys);
  std::vector<Expression> out;
  for (int j = 1; j <= sys.ctx.m; ++j) {
    Expression r = pr.coefficient(j, n) - pr.apply(sys.rhs[static_cast<std::size_t>(j) - 1]);
    r = substitute_simultaneous(r, shell);
    out.push_back(apply_rules(r, sys.rules));
  }
  return out;
}

// Integer-primitive with positive leading coefficient.
Expression primitive(const Expression& e) {
  const auto& terms = e.numerator().terms();
  if (terms.empty()) return e;
  Integer den_lcm = 1, num_gcd = 0;
  for (const auto& t : terms) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coefficient.get_den_mpz_t());
  for (const auto& t : terms) {
    Integer k = t.coefficient.get_num() * (den_lcm / t.coefficient.get_den());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), k.get_mpz_t());
  }
  Rational scale(den_lcm, num_gcd);
  scale.canonicalize();
  if (terms[0].coefficient < 0) scale = -scale;
  return Expression(scale) * e;
}

// Multiplies away negative powers of the given atoms.
Expression clear_negative_powers(const Expression& e, const std::vector<Atom>& atoms) {
  Monomial lift;
  for (const auto& a : atoms) {
    int lowest = 0;
    for (const auto& t : e.numerator().terms()) lowest = std::min(lowest, exponent_of(t.monomial, a));
    if (lowest < 0) lift.push_back({a, -lowest});
  }
  if (lift.empty()) return e;
  return Expression::from_parts(Polynomial(lift), {}) * e;
}

}  // namespace

InvarianceReport invariance_residual(const VectorField& v, const OdeSystem& sys, std::uint64_t seed) {
  InvarianceReport report;
  report.residuals = raw_residuals(v, sys);
  ZeroTestOptions options = sys.zero_options(seed);
  for (const auto& r : report.residuals) report.tests.push_back(zero_test(r, sys.rules, options));
  return report;
}

DeterminingSystem determining_equations(const OdeSystem& sys, const VectorField& ansatz) {
  std::vector<Expression> residuals = raw_residuals(ansatz, sys);
  std::vector<Atom> vars;
  for (int k = 1; k < sys.ctx.order; ++k) {
    for (const auto& s : sys.ctx.jets(k)) vars.emplace_back(s);
  }

  struct Entry {
    std::size_t residual;
    Monomial monomial;
    std::vector<int> exponents;
    int degree;
    Expression coefficient;
  };
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    Expression num = clear_negative_powers(residuals[i].numerator_expression(), vars);
    Collected parts;
    try {
      parts = collect(num, vars);
    } catch (const NotPolynomialError& e) {
      throw NotPolynomialError(std::string("determining equations: ") + e.what());
    }
    for (auto& [mono, coeff] : parts) {
      if (coeff.is_zero()) continue;
      Entry entry{i, mono, {}, total_degree(mono), coeff};
      for (const auto& a : vars) entry.exponents.push_back(exponent_of(mono, a));
      entries.push_back(std::move(entry));
    }
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.degree != b.degree) return a.degree > b.degree;
    for (std::size_t k = a.exponents.size(); k-- > 0;) {
      if (a.exponents[k] != b.exponents[k]) return a.exponents[k] > b.exponents[k];
    }
    return a.residual < b.residual;
  });

  DeterminingSystem out;
  for (auto& entry : entries) {
    Expression eq = primitive(entry.coefficient);
    auto it = std::find(out.equations.begin(), out.equations.end(), eq);
    std::size_t index = static_cast<std::size_t>(it - out.equations.begin());
    if (it == out.equations.end()) out.equations.push_back(eq);
    out.monomial_index.emplace(std::make_pair(entry.residual, entry.monomial), index);
  }
  for (std::size_t i = 0; i < ansatz.size(); ++i) {
    for (const auto& f : functions_of(ansatz.component(i))) {
      Symbol head = f.underived();
      if (std::find(out.unknowns.begin(), out.unknowns.end(), head) == out.unknowns.end()) {
        out.unknowns.push_back(head);
      }
    }
  }
  return out;
}

VectorField general_ansatz(const JetContext& ctx, const std::vector<std::string>& names) {
  if (names.size() != static_cast<std::size_t>(ctx.m) + 1) throw Error("general ansatz needs m + 1 names");
  std::vector<Expression> args{Symbol::independent()};
  for (int j = 1; j <= ctx.m; ++j) args.emplace_back(Symbol::dependent(j));
  std::vector<Expression> phi;
  for (std::size_t i = 1; i < names.size(); ++i) phi.push_back(Expression::apply(names[i], args));
  return VectorField(ctx, Expression::apply(names[0], args), std::move(phi));
}

VectorField commutator(const VectorField& v, const VectorField& w) {
  if (v.context().m != w.context().m) throw ContextMismatchError("commutator of fields over different jet spaces");
  std::vector<Expression> phi;
  for (std::size_t j = 0; j < v.phi().size(); ++j) phi.push_back(v.apply(w.phi()[j]) - w.apply(v.phi()[j]));
  return VectorField(v.context(), v.apply(w.xi()) - w.apply(v.xi()), std::move(phi));
}

bool is_non_cartan(const VectorField& v) {
  for (const auto& s : symbols_of(v.xi())) {
    if (s.is_dependent()) return true;
  }
  return false;
}

VectorField change_coordinates(const VectorField& v, const PointTransformation& t) {
  if (!t.inverse) throw Error("change of coordinates needs a declared inverse");
  const JetContext& ctx = v.context();
  if (t.new_dependents.size() != static_cast<std::size_t>(ctx.m)) {
    throw ContextMismatchError("transformation has the wrong number of dependent components");
  }
  ZeroTestOptions options;
  options.models = t.models;
  auto checkable = [&](const Expression& e) {
    for (const auto& name : t.opaque_inverses) {
      if (!mentions_function(e, name)) continue;
      bool modelled = std::any_of(t.models.begin(), t.models.end(),
                                  [&](const NumericModel& m) { return m.functions.count(name) > 0; });
      if (!modelled) return false;
    }
    return true;
  };
  for (std::size_t i = 0; i <= t.new_dependents.size(); ++i) {
    const Expression& psi = i == 0 ? t.new_independent : t.new_dependents[i - 1];
    Expression coordinate = i == 0 ? Expression(Symbol::independent()) : Expression(Symbol::dependent(static_cast<int>(i)));
    Expression roundtrip = substitute_simultaneous(psi, *t.inverse) - coordinate;
    if (!checkable(roundtrip)) continue;
    if (!is_zero(roundtrip, t.rules, options)) {
      throw Error("declared inverse does not invert the transformation (component " + std::to_string(i) + ")");
    }
  }
  auto push = [&](const Expression& psi) {
    Expression e = apply_rules(v.apply(psi), t.rules);
    return apply_rules(substitute_simultaneous(e, *t.inverse), t.rules);
  };
  std::vector<Expression> phi;
  for (const auto& psi : t.new_dependents) phi.push_back(push(psi));
  return VectorField(ctx, push(t.new_independent), std::move(phi));
}

namespace {

// Rows indexed by (component, monomial) of the cleared components.
RationalMatrix coefficient_matrix(const std::vector<std::vector<Expression>>& columns) {
  std::size_t comps = columns.empty() ? 0 : columns[0].size();
  std::vector<std::map<Monomial, std::vector<Rational>, MonomialGreater>> rows(comps);
  for (std::size_t i = 0; i < comps; ++i) {
    Expression common(1);
    std::vector<DenominatorFactor> factors;
    for (const auto& col : columns) {
      for (const auto& f : col[i].denominator()) {
        auto it = std::find_if(factors.begin(), factors.end(), [&](const DenominatorFactor& g) { return g.base == f.base; });
        if (it == factors.end()) {
          factors.push_back(f);
        } else {
          it->exponent = std::max(it->exponent, f.exponent);
        }
      }
    }
    Expression den = reciprocal(Expression::from_parts(Polynomial(Rational(1)), factors));
    for (std::size_t c = 0; c < columns.size(); ++c) {
      Expression cleared = columns[c][i] * den;
      if (!cleared.is_polynomial()) throw Error("algebra report: components do not share a denominator");
      for (const auto& t : cleared.numerator().terms()) {
        auto& row = rows[i][t.monomial];
        if (row.empty()) row.assign(columns.size(), 0);
        row[c] = t.coefficient;
      }
    }
  }
  RationalMatrix out;
  for (auto& comp : rows) {
    for (auto& [mono, row] : comp) out.push_back(std::move(row));
  }
  return out;
}

std::vector<Expression> components(const VectorField& v, const std::vector<RewriteRule>& rules) {
  std::vector<Expression> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(apply_rules(v.component(i), rules, true));
  return out;
}

}  // namespace

LieAlgebraReport algebra_report(const std::vector<VectorField>& fields, const std::vector<RewriteRule>& rules) {
  LieAlgebraReport report;
  report.basis = fields;
  std::size_t k = fields.size();
  if (k == 0) {
    report.independent = report.closed = report.abelian = true;
    return report;
  }
  for (const auto& f : fields) {
    if (f.context().m != fields[0].context().m) throw ContextMismatchError("fields over different jet spaces");
    if (is_non_cartan(f)) ++report.non_cartan_count;
  }
  std::vector<std::vector<Expression>> columns;
  for (const auto& f : fields) columns.push_back(components(f, rules));
  report.rank = rank(coefficient_matrix(columns));
  report.independent = report.rank == k;

  report.structure_constants.assign(k, std::vector<std::optional<std::vector<Rational>>>(k));
  report.closed = true;
  report.abelian = true;
  for (std::size_t i = 0; i < k; ++i) {
    report.structure_constants[i][i] = std::vector<Rational>(k, 0);
    for (std::size_t j = i + 1; j < k; ++j) {
      auto bracket = components(commutator(fields[i], fields[j]), rules);
      auto cols = columns;
      cols.push_back(bracket);
      RationalMatrix a = coefficient_matrix(cols);
      RationalVector b;
      for (auto& row : a) {
        b.push_back(row.back());
        row.pop_back();
      }
      auto c = solve(a, b);
      if (!c) {
        report.closed = false;
        report.abelian = false;
        continue;
      }
      if (std::any_of(c->begin(), c->end(), [](const Rational& r) { return r != 0; })) report.abelian = false;
      std::vector<Rational> neg = *c;
      for (auto& r : neg) r = -r;
      report.structure_constants[i][j] = std::move(*c);
      report.structure_constants[j][i] = std::move(neg);
    }
  }
  return report;
}

}  // namespace liesym
