#pragma once

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "liesym/rational.hpp"
#include "liesym/symbol.hpp"

namespace liesym {

class Expression;

/// A plain symbol or an opaque function application. Atoms are the
/// indeterminates of the polynomial normal form; applications carry their
/// (normalized) argument expressions.
class Atom {
 public:
  explicit Atom(Symbol symbol);
  Atom(Symbol function, std::vector<Expression> arguments);

  const Symbol& head() const;
  const std::vector<Expression>& arguments() const;
  bool is_application() const { return head().is_function(); }

  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);
  friend bool operator==(const Atom& a, const Atom& b) { return (a <=> b) == 0; }

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

struct Power {
  Atom atom;
  int exponent;  // never zero
};

// Sorted by atom, ascending. Negative exponents are allowed (Laurent monomials).
using Monomial = std::vector<Power>;

// Lexicographic monomial order with the smallest atom most significant.
// Returns <0, 0, >0.
int compare(const Monomial& a, const Monomial& b);
Monomial operator*(const Monomial& a, const Monomial& b);
Monomial inverse(const Monomial& m);
int exponent_of(const Monomial& m, const Atom& atom);
int total_degree(const Monomial& m);

// Orders monomials leading-first.
struct MonomialGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }
};

struct Term {
  Monomial monomial;
  Rational coefficient;
};

/// Laurent polynomial with rational coefficients. Terms are kept sorted
/// leading-first with no zero coefficients and no repeated monomials.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(const Rational& constant);
  explicit Polynomial(Monomial monomial, const Rational& coefficient = 1);
  static Polynomial from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_monomial() const noexcept { return terms_.size() == 1; }
  std::optional<Rational> constant() const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial scaled(const Rational& factor) const;
  Polynomial shifted(const Monomial& factor) const;
  Polynomial pow(unsigned exponent) const;

  // Quotient when `divisor` divides this polynomial exactly in the Laurent ring.
  std::optional<Polynomial> divide_exact(const Polynomial& divisor) const;

  friend std::strong_ordering operator<=>(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return (a <=> b) == 0; }

 private:
  std::vector<Term> terms_;
};

struct DenominatorFactor {
  Polynomial base;  // integer-primitive, positive leading coefficient, no monomial content
  int exponent;     // > 0
};

/// Immutable symbolic expression in canonical form: a Laurent polynomial
/// numerator over a product of powers of primitive polynomial factors.
///
/// Every constructor and arithmetic operation returns the canonical form, so
/// structural equality coincides with mathematical equality on the rational
/// fragment whenever denominators are irreducible (the case for every formula
/// this library manipulates). Use `is_zero()` on a difference for a decision
/// that does not depend on that assumption.
class Expression {
 public:
  Expression();
  Expression(int value);   // NOLINT(google-explicit-constructor)
  Expression(long value);  // NOLINT(google-explicit-constructor)
  Expression(const Rational& value);  // NOLINT(google-explicit-constructor)
  Expression(const Symbol& symbol);   // NOLINT(google-explicit-constructor)
  explicit Expression(const Atom& atom);

  static Expression apply(const Symbol& function, std::vector<Expression> arguments);
  static Expression apply(const std::string& function, std::vector<Expression> arguments);
  // Canonicalizes arbitrary parts; factors need not be primitive.
  static Expression from_parts(Polynomial numerator, std::vector<DenominatorFactor> denominator);

  const Polynomial& numerator() const;
  const std::vector<DenominatorFactor>& denominator() const;

  bool is_zero() const { return numerator().is_zero(); }
  bool is_polynomial() const { return denominator().empty(); }
  std::optional<Rational> constant_value() const;
  std::optional<Atom> as_atom() const;
  std::optional<Symbol> as_symbol() const;

  // The denominator alone (numerator 1) and the numerator alone.
  Expression denominator_expression() const;
  Expression numerator_expression() const;

  Expression operator-() const;
  Expression& operator+=(const Expression& other);
  Expression& operator-=(const Expression& other);
  Expression& operator*=(const Expression& other);
  Expression& operator/=(const Expression& other);

  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator/(const Expression& a, const Expression& b);

  friend std::strong_ordering operator<=>(const Expression& a, const Expression& b);
  friend bool operator==(const Expression& a, const Expression& b) { return (a <=> b) == 0; }

 private:
  struct Data;
  explicit Expression(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  static const std::shared_ptr<const Data>& zero_data();
  static Expression make(Polynomial numerator, std::vector<DenominatorFactor> denominator);
  friend Expression reciprocal(const Expression& e);

  std::shared_ptr<const Data> data_;
};

Expression pow(const Expression& base, int exponent);
Expression reciprocal(const Expression& e);

/// Partial derivative treating every non-function symbol as an independent
/// coordinate. Applications differentiate through the chain rule, raising the
/// derivative multi-index of the applied function.
Expression differentiate(const Expression& e, const Symbol& variable);

using Bindings = std::map<Symbol, Expression>;

/// Substitution with closure semantics: bindings may refer to other keys as
/// long as the dependency graph is acyclic; a cycle raises CyclicBindingError.
Expression substitute(const Expression& e, const Bindings& bindings);

/// One-shot simultaneous substitution; values are not rescanned, so bindings
/// such as {x -> f(x)} relabel coordinates.
Expression substitute_simultaneous(const Expression& e, const Bindings& bindings);

/// Rebuilds `e`, offering every atom (after its arguments are rebuilt) to
/// `replace`. Returns `e` itself when nothing changed.
Expression map_atoms(const Expression& e,
                     const std::function<std::optional<Expression>(const Atom&)>& replace);

/// Re-derives the canonical form from scratch, including inside arguments.
Expression normalize(const Expression& e);

using Collected = std::map<Monomial, Expression, MonomialGreater>;

/// Coefficients of `e` as a polynomial in `variables`. Throws
/// NotPolynomialError when a variable occurs in a denominator, with a negative
/// exponent, or inside a function argument.
Collected collect(const Expression& e, const std::vector<Atom>& variables);
Collected collect(const Expression& e, const std::vector<Symbol>& variables);

/// Degree of `e`'s numerator in `variable`; the numerator must be polynomial in it.
int degree(const Expression& e, const Atom& variable);

// Non-function symbols occurring anywhere in `e`, including inside arguments.
std::set<Symbol> symbols_of(const Expression& e);
// Heads of all applications in `e`, derivative multi-indices included.
std::set<Symbol> functions_of(const Expression& e);
std::set<Atom> atoms_of(const Expression& e);
bool depends_on(const Expression& e, const Symbol& symbol);
bool mentions_function(const Expression& e, const std::string& name);
bool has_applications(const Expression& e);

struct PrintOptions {
  // Name of dependent variable i is dependent_names[i-1]; "y<i>" when absent.
  std::vector<std::string> dependent_names;

  static PrintOptions for_dimension(int m);
  static PrintOptions y_w() { return PrintOptions{{"y", "w"}}; }
  std::string dependent_name(int index) const;
};

std::string to_string(const Expression& e, const PrintOptions& options = {});
std::string to_string(const Atom& atom, const PrintOptions& options = {});
std::string to_string(const Monomial& m, const PrintOptions& options = {});
std::ostream& operator<<(std::ostream& os, const Expression& e);

}  // namespace liesym
