#include "liesym/parser.hpp"

#include <cctype>
#include <map>
#include <string>

#include "liesym/errors.hpp"

namespace liesym {

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::size_t offset, const ParseOptions& options)
      : text_(text), offset_(offset), options_(options) {}

  Expression parse_all() {
    Expression e = expression();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  std::map<std::string, std::size_t> arities_;
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, offset_ + pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expression expression() {
    Expression e = term();
    for (;;) {
      if (accept('+')) {
        e += term();
      } else if (accept('-')) {
        e -= term();
      } else {
        return e;
      }
    }
  }

  Expression term() {
    Expression e = unary();
    for (;;) {
      if (accept('*')) {
        e *= unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Expression d = unary();
        if (d.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        e /= d;
      } else {
        return e;
      }
    }
  }

  Expression unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expression power() {
    Expression base = primary();
    if (!accept('^')) return base;
    bool paren = accept('(');
    bool negative = accept('-');
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer exponent");
    if (pos_ - start > 6) fail("exponent too large");
    int k = std::stoi(std::string(text_.substr(start, pos_ - start)));
    if (paren) expect(')');
    if (negative) k = -k;
    if (k < 0 && base.is_zero()) fail("division by zero");
    return pow(base, k);
  }

  Expression number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string digits(text_.substr(start, pos_ - start));
    Integer scale = 1;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      std::size_t frac = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      digits += std::string(text_.substr(frac, pos_ - frac));
      for (std::size_t i = frac; i < pos_; ++i) scale *= 10;
    }
    if (digits.empty()) fail("malformed number");
    Rational value(Integer(digits, 10), scale);
    value.canonicalize();
    return Expression(value);
  }

  int primes() {
    int k = 0;
    while (pos_ < text_.size() && text_[pos_] == '\'') {
      ++pos_;
      ++k;
    }
    return k;
  }

  std::vector<int> multi_index() {
    std::vector<int> out;
    do {
      skip_space();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a derivative order");
      out.push_back(std::stoi(std::string(text_.substr(start, pos_ - start))));
    } while (accept(','));
    expect(']');
    return out;
  }

  Symbol dependent(int index, int order, std::size_t at) {
    if (options_.m > 0 && index > options_.m) {
      pos_ = at;
      fail("dependent variable index " + std::to_string(index) + " exceeds m = " + std::to_string(options_.m));
    }
    return Symbol::jet(index, order);
  }

  Expression primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      Expression e = expression();
      expect(')');
      return e;
    }
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) fail("unexpected '" + std::string(1, c) + "'");
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    std::string name(text_.substr(start, pos_ - start));
    int order = primes();
    std::vector<int> derivs;
    bool bracket = false;
    if (order == 0 && pos_ < text_.size() && text_[pos_] == '[') {
      ++pos_;
      derivs = multi_index();
      bracket = true;
    }
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      std::vector<Expression> args;
      if (!accept(')')) {
        do {
          args.push_back(expression());
        } while (accept(','));
        expect(')');
      }
      if (args.empty()) fail("function '" + name + "' needs at least one argument");
      if (bracket) {
        if (derivs.size() != args.size()) {
          pos_ = start;
          fail("arity mismatch for '" + name + "'");
        }
      } else if (order > 0) {
        if (args.size() != 1) {
          pos_ = start;
          fail("primes need a function of one argument ('" + name + "')");
        }
        derivs = {order};
      } else {
        derivs.assign(args.size(), 0);
      }
      auto [it, fresh] = arities_.emplace(name, args.size());
      if (!fresh && it->second != args.size()) {
        pos_ = start;
        fail("function '" + name + "' used with " + std::to_string(args.size()) + " and " +
             std::to_string(it->second) + " arguments");
      }
      return Expression::apply(Symbol::function(name, derivs), std::move(args));
    }
    if (bracket) fail("derivative index on '" + name + "' without arguments");
    if (name == "x") {
      if (order) fail("primes on the independent variable");
      return Symbol::independent();
    }
    if (name == "y") return dependent(1, order, start);
    if (name == "w" && options_.m != 1) return dependent(2, order, start);
    if (name == "p" && options_.m <= 1) {
      if (order) fail("primes on p");
      return Symbol::jet(1, 1);
    }
    if (name.size() > 1 && name[0] == 'y' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos && name[1] != '0') {
      if (name.size() > 4) fail("dependent variable index too large");
      return dependent(std::stoi(name.substr(1)), order, start);
    }
    if (order) {
      pos_ = start;
      fail("primes on parameter '" + name + "'");
    }
    return Symbol::parameter(name);
  }

  std::string_view text_;
  std::size_t offset_;
  const ParseOptions& options_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse(std::string_view text, const ParseOptions& options) {
  Parser parser(text, 0, options);
  return parser.parse_all();
}

std::vector<Equation> parse_equations(std::string_view text, const ParseOptions& options) {
  std::vector<Equation> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view piece = text.substr(start, end - start);
    if (piece.find_first_not_of(" \t\r\n") != std::string_view::npos) {
      std::size_t eq = piece.find('=');
      if (eq == std::string_view::npos) {
        out.push_back({Parser(piece, start, options).parse_all(), Expression()});
      } else {
        if (piece.find('=', eq + 1) != std::string_view::npos) {
          throw ParseError("more than one '=' in an equation", start + piece.find('=', eq + 1));
        }
        Expression lhs = Parser(piece.substr(0, eq), start, options).parse_all();
        Expression rhs = Parser(piece.substr(eq + 1), start + eq + 1, options).parse_all();
        out.push_back({lhs, rhs});
      }
    }
    start = end + 1;
  }
  if (out.empty()) throw ParseError("no equations", 0);
  return out;
}

std::vector<Expression> parse_field_components(std::string_view text, int m) {
  if (m < 1) throw Error("vector fields need m >= 1");
  Expression e = parse(text, ParseOptions{m});
  std::vector<Symbol> basis{Symbol::parameter("dx")};
  for (int j = 1; j <= m; ++j) basis.push_back(Symbol::parameter("dy" + std::to_string(j)));
  // Aliases for the first two dependent variables.
  Bindings aliases{{Symbol::parameter("dy"), Symbol::parameter("dy1")}};
  if (m >= 2) aliases.emplace(Symbol::parameter("dw"), Symbol::parameter("dy2"));
  e = substitute_simultaneous(e, aliases);
  Collected parts;
  try {
    parts = collect(e, basis);
  } catch (const NotPolynomialError&) {
    throw ParseError("vector field must be linear in dx, dy1, ...", 0);
  }
  std::vector<Expression> out(static_cast<std::size_t>(m) + 1);
  for (const auto& [monomial, coefficient] : parts) {
    if (monomial.size() != 1 || monomial[0].exponent != 1) {
      throw ParseError("vector field must be linear in dx, dy1, ...", 0);
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (monomial[0].atom == Atom(basis[i])) out[i] = coefficient;
    }
  }
  return out;
}

}  // namespace liesym
