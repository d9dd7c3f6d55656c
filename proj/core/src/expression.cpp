#include "liesym/expression.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>
#include <utility>

#include "liesym/errors.hpp"

namespace liesym {

// ---------------------------------------------------------------------------
// Atom

struct Atom::Node {
  Symbol head;
  std::vector<Expression> arguments;
};

Atom::Atom(Symbol symbol) {
  if (symbol.is_function()) throw Error("function symbol '" + symbol.name() + "' needs arguments");
  node_ = std::make_shared<const Node>(Node{std::move(symbol), {}});
}

Atom::Atom(Symbol function, std::vector<Expression> arguments) {
  if (!function.is_function()) throw Error("only function symbols take arguments");
  if (arguments.size() != function.arity()) {
    throw Error("function '" + function.name() + "' expects " + std::to_string(function.arity()) +
                " argument(s), got " + std::to_string(arguments.size()));
  }
  node_ = std::make_shared<const Node>(Node{std::move(function), std::move(arguments)});
}

const Symbol& Atom::head() const { return node_->head; }
const std::vector<Expression>& Atom::arguments() const { return node_->arguments; }

std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.node_->head <=> b.node_->head; c != 0) return c;
  const auto& x = a.node_->arguments;
  const auto& y = b.node_->arguments;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (auto c = x[i] <=> y[i]; c != 0) return c;
  }
  return x.size() <=> y.size();
}

// ---------------------------------------------------------------------------
// Monomials

int compare(const Monomial& a, const Monomial& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].atom < b[j].atom)) return a[i].exponent > 0 ? 1 : -1;
    if (i == a.size() || b[j].atom < a[i].atom) return b[j].exponent > 0 ? -1 : 1;
    if (a[i].exponent != b[j].exponent) return a[i].exponent > b[j].exponent ? 1 : -1;
    ++i;
    ++j;
  }
  return 0;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].atom < b[j].atom)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].atom < a[i].atom) {
      out.push_back(b[j++]);
    } else {
      int e = a[i].exponent + b[j].exponent;
      if (e != 0) out.push_back({a[i].atom, e});
      ++i;
      ++j;
    }
  }
  return out;
}

Monomial inverse(const Monomial& m) {
  Monomial out = m;
  for (auto& p : out) p.exponent = -p.exponent;
  return out;
}

int exponent_of(const Monomial& m, const Atom& atom) {
  for (const auto& p : m) {
    if (p.atom == atom) return p.exponent;
  }
  return 0;
}

int total_degree(const Monomial& m) {
  int d = 0;
  for (const auto& p : m) d += p.exponent;
  return d;
}

namespace {

// Monomial with the smallest exponent of every atom occurring in `terms`
// (atoms absent from a term count as exponent 0).
Monomial minimal_exponents(const std::vector<Term>& terms) {
  std::map<Atom, int> mins;
  for (const auto& t : terms) {
    for (const auto& p : t.monomial) {
      auto [it, inserted] = mins.emplace(p.atom, p.exponent);
      if (!inserted) it->second = std::min(it->second, p.exponent);
    }
  }
  Monomial out;
  for (const auto& [atom, e] : mins) {
    int m = e;
    for (const auto& t : terms) {
      if (exponent_of(t.monomial, atom) == 0) {
        m = std::min(m, 0);
        break;
      }
    }
    if (m != 0) out.push_back({atom, m});
  }
  return out;
}

bool divides(const Monomial& d, const Monomial& m) {
  // Both non-negative; every exponent of d must be <= that of m.
  for (const auto& p : d) {
    if (exponent_of(m, p.atom) < p.exponent) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(const Rational& constant) {
  if (constant != 0) {
    terms_.push_back({{}, constant});
    terms_.back().coefficient.canonicalize();
  }
}

Polynomial::Polynomial(Monomial monomial, const Rational& coefficient) {
  if (coefficient != 0) {
    terms_.push_back({std::move(monomial), coefficient});
    terms_.back().coefficient.canonicalize();
  }
}

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return compare(a.monomial, b.monomial) > 0; });
  Polynomial out;
  for (auto& t : terms) {
    t.coefficient.canonicalize();
    if (!out.terms_.empty() && compare(out.terms_.back().monomial, t.monomial) == 0) {
      out.terms_.back().coefficient += t.coefficient;
      if (out.terms_.back().coefficient == 0) out.terms_.pop_back();
    } else if (t.coefficient != 0) {
      out.terms_.push_back(std::move(t));
    }
  }
  return out;
}

std::optional<Rational> Polynomial::constant() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_[0].monomial.empty()) return terms_[0].coefficient;
  return std::nullopt;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& t : out.terms_) t.coefficient = -t.coefficient;
  return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  out.terms_.reserve(a.terms_.size() + b.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < a.terms_.size() || j < b.terms_.size()) {
    int c = 0;
    if (i == a.terms_.size()) {
      c = -1;
    } else if (j == b.terms_.size()) {
      c = 1;
    } else {
      c = compare(a.terms_[i].monomial, b.terms_[j].monomial);
    }
    if (c > 0) {
      out.terms_.push_back(a.terms_[i++]);
    } else if (c < 0) {
      out.terms_.push_back(b.terms_[j++]);
    } else {
      Rational s = a.terms_[i].coefficient + b.terms_[j].coefficient;
      if (s != 0) out.terms_.push_back({a.terms_[i].monomial, s});
      ++i;
      ++j;
    }
  }
  return out;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.terms_.size() == 1) return b.shifted(a.terms_[0].monomial).scaled(a.terms_[0].coefficient);
  if (b.terms_.size() == 1) return a.shifted(b.terms_[0].monomial).scaled(b.terms_[0].coefficient);
  std::vector<Term> terms;
  terms.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_) {
    for (const auto& t : b.terms_) {
      terms.push_back({s.monomial * t.monomial, s.coefficient * t.coefficient});
    }
  }
  return Polynomial::from_terms(std::move(terms));
}

Polynomial Polynomial::scaled(const Rational& factor) const {
  if (factor == 0) return {};
  Polynomial out = *this;
  for (auto& t : out.terms_) t.coefficient *= factor;
  return out;
}

Polynomial Polynomial::shifted(const Monomial& factor) const {
  if (factor.empty()) return *this;
  Polynomial out;
  out.terms_.reserve(terms_.size());
  // Multiplying by a monomial preserves the order of distinct monomials.
  for (const auto& t : terms_) out.terms_.push_back({t.monomial * factor, t.coefficient});
  return out;
}

Polynomial Polynomial::pow(unsigned exponent) const {
  Polynomial result(Rational(1));
  Polynomial base = *this;
  while (exponent > 0) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return result;
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& divisor) const {
  if (divisor.is_zero()) throw Error("polynomial division by zero");
  if (is_zero()) return Polynomial{};
  if (divisor.is_monomial()) {
    const auto& d = divisor.terms_[0];
    return shifted(inverse(d.monomial)).scaled(1 / d.coefficient);
  }
  // Clear negative exponents on both sides, then run lex division.
  Monomial lift_num = inverse(minimal_exponents(terms_));
  Monomial lift_den = inverse(minimal_exponents(divisor.terms_));
  Polynomial r = shifted(lift_num);
  Polynomial d = divisor.shifted(lift_den);
  const Term& lead = d.terms_.front();
  std::vector<Term> quotient;
  constexpr int kMaxSteps = 200000;
  for (int step = 0; !r.is_zero(); ++step) {
    if (step > kMaxSteps) return std::nullopt;
    const Term& lt = r.terms_.front();
    if (!divides(lead.monomial, lt.monomial)) return std::nullopt;
    Term q{lt.monomial * inverse(lead.monomial), lt.coefficient / lead.coefficient};
    r = r - d.shifted(q.monomial).scaled(q.coefficient);
    quotient.push_back(std::move(q));
  }
  return from_terms(std::move(quotient)).shifted(lift_den * inverse(lift_num));
}

std::strong_ordering operator<=>(const Polynomial& a, const Polynomial& b) {
  for (std::size_t i = 0; i < a.terms_.size() && i < b.terms_.size(); ++i) {
    int c = compare(a.terms_[i].monomial, b.terms_[i].monomial);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    int k = cmp(a.terms_[i].coefficient, b.terms_[i].coefficient);
    if (k != 0) return k < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return a.terms_.size() <=> b.terms_.size();
}

// ---------------------------------------------------------------------------
// Expression

struct Expression::Data {
  Polynomial numerator;
  std::vector<DenominatorFactor> denominator;  // sorted by base
};

namespace {

struct ContentSplit {
  Rational coefficient;
  Monomial content;
  Polynomial primitive;  // constant 1 when the input was a monomial
};

// p == coefficient * content * primitive with `primitive` integer-primitive,
// free of monomial content and with positive leading coefficient.
ContentSplit split_content(const Polynomial& p) {
  assert(!p.is_zero());
  Monomial content = minimal_exponents(p.terms());
  Polynomial prim = p.shifted(inverse(content));
  if (prim.is_monomial()) return {prim.terms()[0].coefficient, content, Polynomial(Rational(1))};
  Integer den_lcm = 1;
  for (const auto& t : prim.terms()) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coefficient.get_den_mpz_t());
  Integer num_gcd = 0;
  for (const auto& t : prim.terms()) {
    Integer n = t.coefficient.get_num() * (den_lcm / t.coefficient.get_den());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), n.get_mpz_t());
  }
  Rational c(num_gcd, den_lcm);
  c.canonicalize();
  if (prim.terms()[0].coefficient < 0) c = -c;
  return {c, content, prim.scaled(1 / c)};
}

std::optional<Integer> integer_root(const Integer& n, unsigned k) {
  if (n < 0) return std::nullopt;
  Integer r;
  if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), k) == 0) return std::nullopt;
  return r;
}

std::optional<Term> term_root(const Term& t, unsigned k) {
  Term out;
  for (const auto& p : t.monomial) {
    if (p.exponent % static_cast<int>(k) != 0) return std::nullopt;
    out.monomial.push_back({p.atom, p.exponent / static_cast<int>(k)});
  }
  if (!is_integer(t.coefficient)) return std::nullopt;
  auto c = integer_root(t.coefficient.get_num(), k);
  if (!c) return std::nullopt;
  out.coefficient = Rational(*c);
  return out;
}

// q with q^k == p, when p is a primitive polynomial that is a perfect k-th power.
std::optional<Polynomial> polynomial_root(const Polynomial& p, unsigned k) {
  auto lead = term_root(p.terms().front(), k);
  if (!lead || !term_root(p.terms().back(), k)) return std::nullopt;
  Polynomial q(lead->monomial, lead->coefficient);
  Polynomial scale = q.pow(k - 1).scaled(Rational(k));
  const Term& s = scale.terms().front();
  for (std::size_t i = 0; i <= p.size(); ++i) {
    Polynomial rest = p - q.pow(k);
    if (rest.is_zero()) return q;
    const Term& r = rest.terms().front();
    if (compare(r.monomial, p.terms().front().monomial) >= 0) return std::nullopt;
    q = q + Polynomial(r.monomial * inverse(s.monomial), r.coefficient / s.coefficient);
  }
  return std::nullopt;
}

// Rewrites a primitive factor that is a perfect power as a power of its root.
DenominatorFactor extract_power(DenominatorFactor f) {
  for (bool found = true; found;) {
    found = false;
    int g = 0;
    for (const auto& pw : f.base.terms().front().monomial) g = std::gcd(g, pw.exponent);
    for (int k = g; k >= 2; --k) {
      if (g % k != 0) continue;
      if (auto q = polynomial_root(f.base, static_cast<unsigned>(k))) {
        f = {std::move(*q), f.exponent * k};
        found = true;
        break;
      }
    }
  }
  return f;
}

bool factor_less(const DenominatorFactor& a, const DenominatorFactor& b) { return a.base < b.base; }

std::vector<DenominatorFactor> merge_factors(const std::vector<DenominatorFactor>& a,
                                             const std::vector<DenominatorFactor>& b, bool take_max) {
  std::vector<DenominatorFactor> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && factor_less(a[i], b[j]))) {
      out.push_back(a[i++]);
    } else if (i == a.size() || factor_less(b[j], a[i])) {
      out.push_back(b[j++]);
    } else {
      int e = take_max ? std::max(a[i].exponent, b[j].exponent) : a[i].exponent + b[j].exponent;
      out.push_back({a[i].base, e});
      ++i;
      ++j;
    }
  }
  return out;
}

// Product of base^(target - have) over the factors of `target`.
Polynomial completion(const std::vector<DenominatorFactor>& target, const std::vector<DenominatorFactor>& have) {
  Polynomial out(Rational(1));
  std::size_t j = 0;
  for (const auto& f : target) {
    while (j < have.size() && factor_less(have[j], f)) ++j;
    int e = f.exponent;
    if (j < have.size() && have[j].base == f.base) e -= have[j].exponent;
    if (e > 0) out = out * f.base.pow(static_cast<unsigned>(e));
  }
  return out;
}

Polynomial expand(const std::vector<DenominatorFactor>& factors) { return completion(factors, {}); }

}  // namespace

const std::shared_ptr<const Expression::Data>& Expression::zero_data() {
  static const auto zero = std::make_shared<const Data>();
  return zero;
}

Expression::Expression() : data_(zero_data()) {}
Expression::Expression(int value) : Expression(Rational(value)) {}
Expression::Expression(long value) : Expression(Rational(value)) {}

Expression::Expression(const Rational& value) {
  data_ = value == 0 ? zero_data() : std::make_shared<const Data>(Data{Polynomial(value), {}});
}

Expression::Expression(const Symbol& symbol) : Expression(Atom(symbol)) {}

Expression::Expression(const Atom& atom)
    : data_(std::make_shared<const Data>(Data{Polynomial(Monomial{{atom, 1}}), {}})) {}

Expression Expression::apply(const Symbol& function, std::vector<Expression> arguments) {
  return Expression(Atom(function, std::move(arguments)));
}

Expression Expression::apply(const std::string& function, std::vector<Expression> arguments) {
  auto arity = arguments.size();
  return apply(Symbol::function(function, arity), std::move(arguments));
}

Expression Expression::make(Polynomial numerator, std::vector<DenominatorFactor> denominator) {
  if (numerator.is_zero()) return Expression();
  std::vector<DenominatorFactor> kept;
  for (auto& f : denominator) {
    while (f.exponent > 0) {
      auto q = numerator.divide_exact(f.base);
      if (!q) break;
      numerator = std::move(*q);
      --f.exponent;
    }
    if (f.exponent > 0) kept.push_back(std::move(f));
  }
  return Expression(std::make_shared<const Data>(Data{std::move(numerator), std::move(kept)}));
}

Expression Expression::from_parts(Polynomial numerator, std::vector<DenominatorFactor> denominator) {
  if (numerator.is_zero()) return Expression();
  std::vector<DenominatorFactor> factors;
  for (auto& f : denominator) {
    if (f.exponent == 0) continue;
    if (f.base.is_zero()) throw Error("division by zero");
    if (f.exponent < 0) {
      numerator = numerator * f.base.pow(static_cast<unsigned>(-f.exponent));
      continue;
    }
    auto split = split_content(f.base);
    Rational c_pow = 1;
    for (int k = 0; k < f.exponent; ++k) c_pow *= split.coefficient;
    Monomial content_pow;
    for (const auto& p : split.content) content_pow.push_back({p.atom, p.exponent * f.exponent});
    numerator = numerator.shifted(inverse(content_pow)).scaled(1 / c_pow);
    if (!split.primitive.constant()) factors = merge_factors(factors, {extract_power({split.primitive, f.exponent})}, false);
  }
  return make(std::move(numerator), std::move(factors));
}

const Polynomial& Expression::numerator() const { return data_->numerator; }
const std::vector<DenominatorFactor>& Expression::denominator() const { return data_->denominator; }

std::optional<Rational> Expression::constant_value() const {
  if (!is_polynomial()) return std::nullopt;
  return numerator().constant();
}

std::optional<Atom> Expression::as_atom() const {
  const auto& terms = numerator().terms();
  if (!is_polynomial() || terms.size() != 1 || terms[0].coefficient != 1) return std::nullopt;
  const auto& m = terms[0].monomial;
  if (m.size() != 1 || m[0].exponent != 1) return std::nullopt;
  return m[0].atom;
}

std::optional<Symbol> Expression::as_symbol() const {
  auto a = as_atom();
  if (!a || a->is_application()) return std::nullopt;
  return a->head();
}

Expression Expression::denominator_expression() const {
  return Expression(std::make_shared<const Data>(Data{expand(denominator()), {}}));
}

Expression Expression::numerator_expression() const {
  if (is_polynomial()) return *this;
  return Expression(std::make_shared<const Data>(Data{numerator(), {}}));
}

Expression Expression::operator-() const {
  if (is_zero()) return *this;
  return Expression(std::make_shared<const Data>(Data{-numerator(), denominator()}));
}

Expression operator+(const Expression& a, const Expression& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_polynomial() && b.is_polynomial()) {
    return Expression::make(a.numerator() + b.numerator(), {});
  }
  auto common = merge_factors(a.denominator(), b.denominator(), true);
  Polynomial num = a.numerator() * completion(common, a.denominator()) +
                   b.numerator() * completion(common, b.denominator());
  return Expression::make(std::move(num), std::move(common));
}

Expression operator-(const Expression& a, const Expression& b) { return a + (-b); }

Expression operator*(const Expression& a, const Expression& b) {
  if (a.is_zero() || b.is_zero()) return Expression();
  if (a.is_polynomial() && b.is_polynomial()) {
    return Expression::make(a.numerator() * b.numerator(), {});
  }
  return Expression::make(a.numerator() * b.numerator(), merge_factors(a.denominator(), b.denominator(), false));
}

Expression reciprocal(const Expression& e) {
  if (e.is_zero()) throw Error("division by zero");
  Polynomial num = expand(e.denominator());
  return Expression::from_parts(std::move(num), {{e.numerator(), 1}});
}

Expression operator/(const Expression& a, const Expression& b) { return a * reciprocal(b); }

Expression& Expression::operator+=(const Expression& other) { return *this = *this + other; }
Expression& Expression::operator-=(const Expression& other) { return *this = *this - other; }
Expression& Expression::operator*=(const Expression& other) { return *this = *this * other; }
Expression& Expression::operator/=(const Expression& other) { return *this = *this / other; }

std::strong_ordering operator<=>(const Expression& a, const Expression& b) {
  if (a.data_ == b.data_) return std::strong_ordering::equal;
  if (auto c = a.numerator() <=> b.numerator(); c != 0) return c;
  const auto& x = a.denominator();
  const auto& y = b.denominator();
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (auto c = x[i].base <=> y[i].base; c != 0) return c;
    if (auto c = x[i].exponent <=> y[i].exponent; c != 0) return c;
  }
  return x.size() <=> y.size();
}

Expression pow(const Expression& base, int exponent) {
  if (exponent == 0) return Expression(1);
  if (exponent < 0) return pow(reciprocal(base), -exponent);
  if (base.is_polynomial()) return Expression::from_parts(base.numerator().pow(static_cast<unsigned>(exponent)), {});
  Expression result(1);
  Expression b = base;
  auto e = static_cast<unsigned>(exponent);
  while (e > 0) {
    if (e & 1U) result = result * b;
    e >>= 1U;
    if (e > 0) b = b * b;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Traversal helpers

namespace {

template <typename Fn>
void for_each_atom(const Expression& e, Fn&& fn) {
  auto visit_poly = [&](const Polynomial& p) {
    for (const auto& t : p.terms()) {
      for (const auto& pw : t.monomial) {
        fn(pw.atom);
        for (const auto& arg : pw.atom.arguments()) for_each_atom(arg, fn);
      }
    }
  };
  visit_poly(e.numerator());
  for (const auto& f : e.denominator()) visit_poly(f.base);
}

void distinct_atoms(const Polynomial& p, std::set<Atom>& out) {
  for (const auto& t : p.terms()) {
    for (const auto& pw : t.monomial) out.insert(pw.atom);
  }
}

}  // namespace

std::set<Symbol> symbols_of(const Expression& e) {
  std::set<Symbol> out;
  for_each_atom(e, [&](const Atom& a) {
    if (!a.is_application()) out.insert(a.head());
  });
  return out;
}

std::set<Symbol> functions_of(const Expression& e) {
  std::set<Symbol> out;
  for_each_atom(e, [&](const Atom& a) {
    if (a.is_application()) out.insert(a.head());
  });
  return out;
}

std::set<Atom> atoms_of(const Expression& e) {
  std::set<Atom> out;
  for_each_atom(e, [&](const Atom& a) { out.insert(a); });
  return out;
}

bool depends_on(const Expression& e, const Symbol& symbol) {
  bool found = false;
  for_each_atom(e, [&](const Atom& a) {
    if (!found && a.head() == symbol) found = true;
  });
  return found;
}

bool mentions_function(const Expression& e, const std::string& name) {
  bool found = false;
  for_each_atom(e, [&](const Atom& a) {
    if (!found && a.is_application() && a.head().name() == name) found = true;
  });
  return found;
}

bool has_applications(const Expression& e) {
  bool found = false;
  for_each_atom(e, [&](const Atom& a) {
    if (a.is_application()) found = true;
  });
  return found;
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

using AtomValues = std::map<Atom, Expression>;

Expression differentiate_atom(const Atom& atom, const Symbol& variable) {
  if (!atom.is_application()) return atom.head() == variable ? Expression(1) : Expression();
  Expression out;
  const auto& args = atom.arguments();
  for (std::size_t i = 0; i < args.size(); ++i) {
    Expression da = differentiate(args[i], variable);
    if (da.is_zero()) continue;
    out += Expression::apply(atom.head().differentiated(i), args) * da;
  }
  return out;
}

Expression differentiate_polynomial(const Polynomial& p, const Symbol& variable) {
  std::set<Atom> atoms;
  distinct_atoms(p, atoms);
  AtomValues derivative;
  bool polynomial = true;
  for (const auto& a : atoms) {
    Expression d = differentiate_atom(a, variable);
    if (d.is_zero()) continue;
    polynomial = polynomial && d.is_polynomial();
    derivative.emplace(a, std::move(d));
  }
  if (derivative.empty()) return Expression();
  if (polynomial) {
    Polynomial acc;
    std::vector<Term> pieces;
    for (const auto& t : p.terms()) {
      for (const auto& pw : t.monomial) {
        auto it = derivative.find(pw.atom);
        if (it == derivative.end()) continue;
        Monomial rest = t.monomial * Monomial{{pw.atom, -1}};
        Polynomial contribution = it->second.numerator().shifted(rest).scaled(t.coefficient * pw.exponent);
        for (const auto& term : contribution.terms()) pieces.push_back(term);
      }
    }
    return Expression::from_parts(Polynomial::from_terms(std::move(pieces)), {});
  }
  Expression out;
  for (const auto& t : p.terms()) {
    for (const auto& pw : t.monomial) {
      auto it = derivative.find(pw.atom);
      if (it == derivative.end()) continue;
      Monomial rest = t.monomial * Monomial{{pw.atom, -1}};
      out += Expression::from_parts(Polynomial(rest, t.coefficient * pw.exponent), {}) * it->second;
    }
  }
  return out;
}

}  // namespace

Expression differentiate(const Expression& e, const Symbol& variable) {
  if (variable.is_function()) throw Error("cannot differentiate with respect to a function symbol");
  Expression dnum = differentiate_polynomial(e.numerator(), variable);
  if (e.is_polynomial()) return dnum;
  Expression inv_den = Expression::from_parts(Polynomial(Rational(1)), e.denominator());
  Expression log_der;
  for (const auto& f : e.denominator()) {
    Expression df = differentiate_polynomial(f.base, variable);
    if (df.is_zero()) continue;
    log_der += Expression(f.exponent) * df / Expression::from_parts(f.base, {});
  }
  Expression num = Expression::from_parts(e.numerator(), {});
  return dnum * inv_den - num * inv_den * log_der;
}

// ---------------------------------------------------------------------------
// Rebuilding and substitution

namespace {

Expression evaluate_polynomial(const Polynomial& p, const AtomValues& values) {
  bool fast = true;
  for (const auto& [atom, v] : values) {
    if (!v.is_polynomial()) {
      fast = false;
      break;
    }
  }
  if (fast) {
    // Negative powers are only cheap when the value is a monomial.
    for (const auto& t : p.terms()) {
      for (const auto& pw : t.monomial) {
        if (pw.exponent >= 0) continue;
        auto it = values.find(pw.atom);
        if (it != values.end() && !it->second.numerator().is_monomial()) fast = false;
      }
    }
  }
  if (fast) {
    std::map<std::pair<Atom, int>, Polynomial> powers;
    auto power_of = [&](const Atom& atom, int e) -> Polynomial {
      auto key = std::make_pair(atom, e);
      if (auto it = powers.find(key); it != powers.end()) return it->second;
      Polynomial value;
      auto vit = values.find(atom);
      if (vit == values.end()) {
        value = Polynomial(Monomial{{atom, e}});
      } else if (e > 0) {
        value = vit->second.numerator().pow(static_cast<unsigned>(e));
      } else {
        const auto& t = vit->second.numerator().terms().front();
        Rational c = 1;
        for (int k = 0; k < -e; ++k) c /= t.coefficient;
        Monomial m;
        for (const auto& pw : t.monomial) m.push_back({pw.atom, pw.exponent * e});
        value = Polynomial(m, c);
      }
      powers.emplace(key, value);
      return value;
    };
    std::vector<Term> pieces;
    for (const auto& t : p.terms()) {
      Polynomial prod(t.coefficient);
      for (const auto& pw : t.monomial) {
        prod = prod * power_of(pw.atom, pw.exponent);
        if (prod.is_zero()) break;
      }
      for (const auto& term : prod.terms()) pieces.push_back(term);
    }
    return Expression::from_parts(Polynomial::from_terms(std::move(pieces)), {});
  }
  Expression out;
  for (const auto& t : p.terms()) {
    Expression prod(t.coefficient);
    for (const auto& pw : t.monomial) {
      auto it = values.find(pw.atom);
      Expression base = it == values.end() ? Expression(pw.atom) : it->second;
      prod *= pow(base, pw.exponent);
      if (prod.is_zero()) break;
    }
    out += prod;
  }
  return out;
}

struct Rebuilder {
  const std::function<std::optional<Expression>(const Atom&)>& replace;
  bool force;
  std::map<Atom, std::optional<Expression>> memo;

  // nullopt when the atom is unchanged.
  std::optional<Expression> atom_value(const Atom& atom) {
    if (auto it = memo.find(atom); it != memo.end()) return it->second;
    std::optional<Expression> result;
    Atom current = atom;
    if (atom.is_application()) {
      std::vector<Expression> args;
      bool changed = false;
      for (const auto& a : atom.arguments()) {
        args.push_back(rebuild(a));
        changed = changed || !(args.back() == a);
      }
      if (changed) current = Atom(atom.head(), std::move(args));
      if (changed) result = Expression(current);
    }
    if (auto r = replace(current)) result = std::move(r);
    memo.emplace(atom, result);
    return result;
  }

  Expression rebuild(const Expression& e) {
    AtomValues values;
    auto scan = [&](const Polynomial& p) {
      for (const auto& t : p.terms()) {
        for (const auto& pw : t.monomial) {
          if (values.count(pw.atom)) continue;
          if (auto v = atom_value(pw.atom)) values.emplace(pw.atom, std::move(*v));
        }
      }
    };
    scan(e.numerator());
    for (const auto& f : e.denominator()) scan(f.base);
    if (values.empty() && !force) return e;
    Expression num = evaluate_polynomial(e.numerator(), values);
    if (e.is_polynomial()) return num;
    // Factor by factor, so the factored denominator survives.
    for (const auto& f : e.denominator()) num *= pow(reciprocal(evaluate_polynomial(f.base, values)), f.exponent);
    return num;
  }
};

}  // namespace

Expression map_atoms(const Expression& e, const std::function<std::optional<Expression>(const Atom&)>& replace) {
  Rebuilder r{replace, false, {}};
  return r.rebuild(e);
}

Expression normalize(const Expression& e) {
  std::function<std::optional<Expression>(const Atom&)> none = [](const Atom&) { return std::nullopt; };
  Rebuilder r{none, true, {}};
  return r.rebuild(e);
}

Expression substitute_simultaneous(const Expression& e, const Bindings& bindings) {
  if (bindings.empty()) return normalize(e);
  for (const auto& [s, v] : bindings) {
    if (s.is_function()) throw Error("substitute binds symbols, not function heads: '" + s.name() + "'");
  }
  return map_atoms(e, [&](const Atom& a) -> std::optional<Expression> {
    if (a.is_application()) return std::nullopt;
    auto it = bindings.find(a.head());
    if (it == bindings.end()) return std::nullopt;
    return it->second;
  });
}

Expression substitute(const Expression& e, const Bindings& bindings) {
  if (bindings.empty()) return normalize(e);
  // Resolve chains between keys; detect cycles by depth-first search.
  Bindings resolved;
  std::map<Symbol, int> state;  // 1 = in progress, 2 = done
  std::function<const Expression&(const Symbol&)> resolve = [&](const Symbol& key) -> const Expression& {
    if (auto it = resolved.find(key); it != resolved.end()) return it->second;
    if (state[key] == 1) throw CyclicBindingError("cyclic binding through '" + to_string(Expression(key)) + "'");
    state[key] = 1;
    const Expression& raw = bindings.at(key);
    Bindings inner;
    for (const auto& s : symbols_of(raw)) {
      if (bindings.count(s)) inner.emplace(s, resolve(s));
    }
    Expression value = inner.empty() ? raw : substitute_simultaneous(raw, inner);
    state[key] = 2;
    return resolved.emplace(key, std::move(value)).first->second;
  };
  for (const auto& [key, value] : bindings) resolve(key);
  return substitute_simultaneous(e, resolved);
}

// ---------------------------------------------------------------------------
// Collection

Collected collect(const Expression& e, const std::vector<Atom>& variables) {
  auto is_var = [&](const Atom& a) { return std::find(variables.begin(), variables.end(), a) != variables.end(); };
  auto mentions_var = [&](const Expression& x) {
    bool found = false;
    for_each_atom(x, [&](const Atom& a) { found = found || is_var(a); });
    return found;
  };
  for (const auto& f : e.denominator()) {
    if (mentions_var(Expression::from_parts(f.base, {}))) {
      throw NotPolynomialError("collect: a variable occurs in a denominator");
    }
  }
  std::map<Monomial, std::vector<Term>, MonomialGreater> groups;
  for (const auto& t : e.numerator().terms()) {
    Monomial key;
    Monomial rest;
    for (const auto& pw : t.monomial) {
      if (is_var(pw.atom)) {
        if (pw.exponent < 0) throw NotPolynomialError("collect: negative power of a variable");
        key.push_back(pw);
      } else {
        for (const auto& arg : pw.atom.arguments()) {
          if (mentions_var(arg)) throw NotPolynomialError("collect: a variable occurs inside a function argument");
        }
        rest.push_back(pw);
      }
    }
    groups[key].push_back({rest, t.coefficient});
  }
  Collected out;
  for (auto& [key, terms] : groups) {
    out.emplace(key, Expression::from_parts(Polynomial::from_terms(std::move(terms)), e.denominator()));
  }
  return out;
}

Collected collect(const Expression& e, const std::vector<Symbol>& variables) {
  std::vector<Atom> atoms;
  atoms.reserve(variables.size());
  for (const auto& s : variables) atoms.emplace_back(s);
  return collect(e, atoms);
}

int degree(const Expression& e, const Atom& variable) {
  int d = 0;
  for (const auto& [m, c] : collect(e.numerator_expression(), std::vector<Atom>{variable})) {
    d = std::max(d, exponent_of(m, variable));
  }
  return d;
}

// ---------------------------------------------------------------------------
// Printing

PrintOptions PrintOptions::for_dimension(int m) {
  if (m == 1) return PrintOptions{{"y"}};
  return {};
}

std::string PrintOptions::dependent_name(int index) const {
  if (index >= 1 && static_cast<std::size_t>(index) <= dependent_names.size()) return dependent_names[index - 1];
  return "y" + std::to_string(index);
}

std::string to_string(const Atom& atom, const PrintOptions& options) {
  const Symbol& h = atom.head();
  switch (h.kind()) {
    case SymbolKind::independent:
    case SymbolKind::parameter:
      return h.name();
    case SymbolKind::jet:
      return options.dependent_name(h.index()) + std::string(static_cast<std::size_t>(h.order()), '\'');
    case SymbolKind::function: {
      std::string out = h.name();
      if (h.arity() == 1) {
        out += std::string(static_cast<std::size_t>(h.derivatives()[0]), '\'');
      } else if (h.total_derivative_order() > 0) {
        out += "[";
        for (std::size_t i = 0; i < h.arity(); ++i) {
          if (i) out += ",";
          out += std::to_string(h.derivatives()[i]);
        }
        out += "]";
      }
      out += "(";
      for (std::size_t i = 0; i < atom.arguments().size(); ++i) {
        if (i) out += ", ";
        out += to_string(atom.arguments()[i], options);
      }
      return out + ")";
    }
  }
  return {};
}

namespace {

std::string power_string(const Power& p, int exponent, const PrintOptions& options) {
  std::string base = to_string(p.atom, options);
  return exponent == 1 ? base : base + "^" + std::to_string(exponent);
}

// Unsigned rendering of |coefficient| * monomial.
std::string term_body(const Rational& abs_coefficient, const Monomial& m, const PrintOptions& options) {
  std::vector<std::string> up, down;
  for (const auto& p : m) {
    if (p.exponent > 0) {
      up.push_back(power_string(p, p.exponent, options));
    } else {
      down.push_back(power_string(p, -p.exponent, options));
    }
  }
  auto join = [](const std::vector<std::string>& parts) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "*" : "") + parts[i];
    return s;
  };
  std::string out;
  if (up.empty()) {
    out = abs_coefficient.get_str();
  } else if (abs_coefficient == 1) {
    out = join(up);
  } else {
    out = abs_coefficient.get_str() + "*" + join(up);
  }
  if (!down.empty()) out += "/" + (down.size() == 1 ? down[0] : "(" + join(down) + ")");
  return out;
}

std::string polynomial_string(const Polynomial& p, const PrintOptions& options) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    bool negative = t.coefficient < 0;
    Rational mag = abs(t.coefficient);
    if (first) {
      out += negative ? "-" : "";
    } else {
      out += negative ? " - " : " + ";
    }
    out += term_body(mag, t.monomial, options);
    first = false;
  }
  return out;
}

}  // namespace

std::string to_string(const Monomial& m, const PrintOptions& options) {
  if (m.empty()) return "1";
  return term_body(1, m, options);
}

std::string to_string(const Expression& e, const PrintOptions& options) {
  // Negative powers shared by several terms move into the denominator.
  Monomial lift;
  if (!e.is_polynomial()) {
    for (const auto& p : minimal_exponents(e.numerator().terms())) {
      if (p.exponent < 0) lift.push_back({p.atom, -p.exponent});
    }
  }
  Polynomial numerator = e.numerator().shifted(lift);
  std::vector<std::string> parts;
  if (!lift.empty()) parts.push_back(term_body(1, lift, options));
  for (const auto& f : e.denominator()) {
    std::string s = "(" + polynomial_string(f.base, options) + ")";
    if (f.exponent != 1) s += "^" + std::to_string(f.exponent);
    parts.push_back(s);
  }
  std::string num = polynomial_string(numerator, options);
  if (parts.empty()) return num;
  if (numerator.size() > 1 || num.find('/') != std::string::npos) num = "(" + num + ")";
  std::string den;
  for (std::size_t i = 0; i < parts.size(); ++i) den += (i ? "*" : "") + parts[i];
  if (parts.size() > 1 || (lift.size() > 1 || (!lift.empty() && lift[0].exponent > 1))) den = "(" + den + ")";
  return num + "/" + den;
}

std::ostream& operator<<(std::ostream& os, const Expression& e) { return os << to_string(e); }

}  // namespace liesym
