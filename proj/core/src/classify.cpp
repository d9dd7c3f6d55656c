#include "liesym/classify.hpp"

#include "liesym/errors.hpp"

namespace liesym {

namespace {

const Symbol kP = Symbol::jet(1, 1);

Expression Y(int j) { return Expression(Symbol::dependent(j)); }

bool p_in_arguments(const Expression& e) {
  for (const auto& a : atoms_of(e)) {
    if (!a.is_application()) continue;
    for (const auto& arg : a.arguments()) {
      if (depends_on(arg, kP)) return true;
    }
  }
  return false;
}

std::string describe(const std::string& name, const Expression& value, ZeroStatus status) {
  std::string out = name + " = " + to_string(value, PrintOptions::y_w());
  if (status == ZeroStatus::nonzero) {
    out += has_applications(value) ? " is symbolically nonzero" : " is nonzero";
  }
  return out;
}

}  // namespace

bool cubic_in_p_test(const Expression& F) {
  if (p_in_arguments(F)) throw InapplicableError("cubic-in-p test: p occurs inside a function argument");
  for (const auto& f : F.denominator()) {
    if (depends_on(Expression::from_parts(f.base, {}), kP)) return false;
  }
  Atom p(kP);
  for (const auto& t : F.numerator().terms()) {
    int e = exponent_of(t.monomial, p);
    if (e < 0 || e > 3) return false;
  }
  return true;
}

LinearSystemSpec LinearSystemSpec::second_order(const ExpressionMatrix& a0) {
  LinearSystemSpec spec;
  spec.m = static_cast<int>(a0.size());
  spec.n = 2;
  ExpressionMatrix zero(a0.size(), std::vector<Expression>(a0.size()));
  spec.coefficients = {a0, zero};
  spec.validate();
  return spec;
}

void LinearSystemSpec::validate() const {
  if (m < 1 || n < 1) throw Error("linear system needs m >= 1 and n >= 1");
  if (coefficients.size() != static_cast<std::size_t>(n)) throw Error("linear system needs n coefficient matrices");
  for (const auto& a : coefficients) {
    if (a.size() != static_cast<std::size_t>(m)) throw ContextMismatchError("coefficient matrix has the wrong size");
    for (const auto& row : a) {
      if (row.size() != static_cast<std::size_t>(m)) throw ContextMismatchError("coefficient matrix has the wrong size");
      for (const auto& e : row) {
        for (const auto& s : symbols_of(e)) {
          if (s.is_jet()) throw Error("coefficients must depend on x only");
        }
      }
    }
  }
  if (forcing && forcing->size() != static_cast<std::size_t>(m)) throw ContextMismatchError("forcing has the wrong size");
}

OdeSystem LinearSystemSpec::to_system(std::vector<RewriteRule> rules, std::vector<NumericModel> models) const {
  validate();
  std::vector<Expression> rhs;
  for (int i = 0; i < m; ++i) {
    Expression f = forcing ? (*forcing)[static_cast<std::size_t>(i)] : Expression();
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < m; ++j) {
        f -= coefficients[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
             Expression(Symbol::jet(j + 1, k));
      }
    }
    rhs.push_back(f);
  }
  return OdeSystem(JetContext(m, n), std::move(rhs), std::move(rules), std::move(models));
}

std::optional<LinearSystemSpec> linear_spec(const OdeSystem& sys) {
  int m = sys.ctx.m, n = sys.ctx.order;
  std::vector<Symbol> jets;
  for (int k = 0; k < n; ++k) {
    for (const auto& s : sys.ctx.jets(k)) jets.push_back(s);
  }
  LinearSystemSpec spec;
  spec.m = m;
  spec.n = n;
  spec.coefficients.assign(static_cast<std::size_t>(n),
                           ExpressionMatrix(static_cast<std::size_t>(m), std::vector<Expression>(static_cast<std::size_t>(m))));
  std::vector<Expression> b(static_cast<std::size_t>(m));
  bool forced = false;
  for (int i = 0; i < m; ++i) {
    Collected parts;
    try {
      parts = collect(sys.rhs[static_cast<std::size_t>(i)], jets);
    } catch (const NotPolynomialError&) {
      return std::nullopt;
    }
    for (const auto& [mono, c] : parts) {
      if (mono.empty()) {
        b[static_cast<std::size_t>(i)] = c;
        forced = true;
        continue;
      }
      if (mono.size() != 1 || mono[0].exponent != 1) return std::nullopt;
      const Symbol& s = mono[0].atom.head();
      spec.coefficients[static_cast<std::size_t>(s.order())][static_cast<std::size_t>(i)][static_cast<std::size_t>(s.index()) - 1] = -c;
    }
  }
  if (forced) spec.forcing = b;
  try {
    spec.validate();
  } catch (const Error&) {
    return std::nullopt;
  }
  return spec;
}

namespace {

void require_normal_form(const LinearSystemSpec& spec) {
  spec.validate();
  if (spec.n != 2) throw Error("classification needs a second-order system");
  for (const auto& row : spec.coefficients[1]) {
    for (const auto& e : row) {
      if (!e.is_zero()) throw Error("system is not in normal form (first-derivative terms present)");
    }
  }
}

ExpressionMatrix trace_free_part(const LinearSystemSpec& spec, Expression* trace) {
  const auto& a0 = spec.coefficients[0];
  Expression tr;
  for (int i = 0; i < spec.m; ++i) tr -= a0[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
  ExpressionMatrix out(static_cast<std::size_t>(spec.m), std::vector<Expression>(static_cast<std::size_t>(spec.m)));
  for (int i = 0; i < spec.m; ++i) {
    for (int j = 0; j < spec.m; ++j) {
      Expression e = -a0[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (i == j) e -= tr / Expression(spec.m);
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = e;
    }
  }
  if (trace) *trace = tr;
  return out;
}

}  // namespace

bool isotropy_test(const LinearSystemSpec& spec, const std::vector<RewriteRule>& rules, const ZeroTestOptions& options) {
  require_normal_form(spec);
  for (const auto& row : trace_free_part(spec, nullptr)) {
    for (const auto& e : row) {
      if (!is_zero(e, rules, options)) return false;
    }
  }
  return true;
}

OdeSystem trace_free_system(const Expression& A, const Expression& B, const Expression& C) {
  return OdeSystem(JetContext(2, 2), {A * Y(1) + B * Y(2), C * Y(1) - A * Y(2)});
}

ClassificationVerdict non_cartan_existence_2x2(const Expression& A, const Expression& B, const Expression& C) {
  ClassificationVerdict verdict;
  std::vector<std::string> obstructions;
  const std::pair<const char*, const Expression*> coefficients[] = {{"A", &A}, {"B", &B}, {"C", &C}};
  for (const auto& [name, value] : coefficients) {
    ZeroStatus status = zero_test(*value).status;
    if (status == ZeroStatus::nonzero) obstructions.push_back(describe(name, *value, status));
  }
  if (!obstructions.empty()) {
    verdict.reason = "no non-Cartan symmetry: ";
    for (std::size_t i = 0; i < obstructions.size(); ++i) verdict.reason += (i ? "; " : "") + obstructions[i];
    return verdict;
  }
  verdict.in_canonical_class = true;
  verdict.reason = "A = B = C = 0: trivial system";
  verdict.witness = non_cartan_generators(2, SourceEquation::trivial());
  verdict.witness_names = non_cartan_names(2);
  return verdict;
}

DeterminingSystem determining_system_2x2(const Expression& A, const Expression& B, const Expression& C,
                                         bool restricted) {
  OdeSystem sys = trace_free_system(A, B, C);
  VectorField ansatz = general_ansatz(sys.ctx, {"xi", "eta", "phi"});
  if (restricted) {
    Expression x = Symbol::independent();
    Expression xi = Expression::apply("alpha", {x}) * Y(1) + Expression::apply("beta", {x}) * Y(2) +
                    Expression::apply("gamma", {x});
    ansatz = VectorField(sys.ctx, xi, ansatz.phi());
  }
  return determining_equations(sys, ansatz);
}

TraceFreeReduction trace_free_reduce(const LinearSystemSpec& spec, const Expression& q,
                                     const std::vector<RewriteRule>& rules, const std::vector<NumericModel>& models) {
  require_normal_form(spec);
  if (spec.m != 2) throw ContextMismatchError("trace-free reduction needs m = 2");
  const Symbol x = Symbol::independent();
  for (const auto& s : symbols_of(q)) {
    if (s.is_jet()) throw Error("auxiliary function must depend on x only");
  }
  const auto& a0 = spec.coefficients[0];
  // y'' = M y with M = -A_0.
  Expression a1 = -a0[0][0], a2 = -a0[0][1], a3 = -a0[1][0], a4 = -a0[1][1];
  Expression dq = differentiate(q, x);
  Expression ddq = differentiate(dq, x);
  TraceFreeReduction out;
  out.residual = apply_rules(Expression(-2) * (a1 + a4) * q * q + 3 * dq * dq - 2 * q * ddq, rules);
  ZeroTestOptions options;
  options.models = models;
  out.status = zero_test(out.residual, rules, options).status;
  if (out.status == ZeroStatus::nonzero) return out;
  if (q.is_zero()) throw Error("auxiliary function must be nonzero");
  out.accepted = true;
  Expression q2 = q * q;
  out.A = apply_rules((a1 - a4) / (2 * q2), rules);
  out.B = apply_rules(a2 / q2, rules);
  out.C = apply_rules(a3 / q2, rules);
  return out;
}

ClassificationVerdict classify_linear_system(const LinearSystemSpec& spec) {
  require_normal_form(spec);
  if (spec.forcing) {
    for (const auto& b : *spec.forcing) {
      if (!b.is_zero()) throw Error("classification needs a homogeneous system");
    }
  }
  ClassificationVerdict verdict;
  Expression trace;
  ExpressionMatrix tf = trace_free_part(spec, &trace);
  std::vector<std::string> obstructions;
  for (int i = 0; i < spec.m; ++i) {
    for (int j = 0; j < spec.m; ++j) {
      const Expression& e = tf[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      ZeroStatus status = zero_test(e).status;
      if (status == ZeroStatus::nonzero) {
        obstructions.push_back("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") of M - (tr M/m) I: " +
                               describe("value", e, status));
      }
    }
  }
  if (!obstructions.empty()) {
    verdict.reason = "non-isotropic: ";
    for (std::size_t k = 0; k < obstructions.size(); ++k) verdict.reason += (k ? "; " : "") + obstructions[k];
    return verdict;
  }
  // y'' + q y = 0 with q = -tr M / m.
  Expression q = -trace / Expression(spec.m);
  SourceEquation src;
  if (q.is_zero()) {
    src = SourceEquation::trivial();
  } else if (q == Expression::apply("q", {Expression(Symbol::independent())})) {
    src = SourceEquation::symbolic();
  } else {
    src = SourceEquation::with_potential(q);
  }
  OdeSystem sys = spec.to_system(src.rules, src.models);
  verdict.witness = non_cartan_generators(spec.m, src);
  verdict.witness_names = non_cartan_names(spec.m);
  for (std::size_t k = 0; k < verdict.witness.size(); ++k) {
    if (!invariance_residual(verdict.witness[k], sys).all_zero()) {
      throw Error("witness " + verdict.witness_names[k] + " failed re-verification");
    }
  }
  verdict.in_canonical_class = true;
  verdict.reason = "isotropic: y'' + q y = 0 in each component with q = " + to_string(q);
  return verdict;
}

}  // namespace liesym
