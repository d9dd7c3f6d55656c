#include <gtest/gtest.h>

#include "liesym/errors.hpp"
#include "liesym/parser.hpp"

namespace liesym {
namespace {

TEST(Parse, JetDerivative) { EXPECT_EQ(parse("y''"), Expression(Symbol::jet(1, 2))); }

TEST(Parse, IndexedJets) {
  EXPECT_EQ(parse("y2'''", ParseOptions{3}), Expression(Symbol::jet(2, 3)));
  EXPECT_EQ(parse("w'", ParseOptions{2}), Expression(Symbol::jet(2, 1)));
  EXPECT_THROW(parse("y4", ParseOptions{3}), ParseError);
}

TEST(Parse, FieldComponents) {
  auto comps = parse_field_components("x^2*dx + x*y*dy", 1);
  ASSERT_EQ(comps.size(), 2u);
  Expression x = Symbol::independent(), y = Symbol::dependent(1);
  EXPECT_EQ(comps[0], x * x);
  EXPECT_EQ(comps[1], x * y);
  EXPECT_THROW(parse_field_components("x*dx*dy", 1), ParseError);
}

TEST(Parse, OpaqueApplication) {
  Expression x = Symbol::independent(), y = Symbol::dependent(1), p = Symbol::jet(1, 1);
  Expression got = parse("H(x - y/p)");
  auto atom = got.as_atom();
  ASSERT_TRUE(atom.has_value());
  EXPECT_EQ(atom->head(), Symbol::function("H", std::size_t{1}));
  ASSERT_EQ(atom->arguments().size(), 1u);
  EXPECT_EQ(atom->arguments()[0], x - y * pow(p, -1));
}

TEST(Parse, DecimalsAreExact) { EXPECT_EQ(parse("0.25*x"), Expression(Rational(1, 4)) * Symbol::independent()); }

TEST(Parse, Equations) {
  auto eqs = parse_equations("y1''+y1=0; y2''");
  ASSERT_EQ(eqs.size(), 2u);
  EXPECT_TRUE(eqs[1].rhs.is_zero());
  EXPECT_THROW(parse_equations("y''=0=1"), ParseError);
}

TEST(Parse, ErrorsCarryPosition) {
  try {
    parse("x + * y");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("at position"), std::string::npos);
  }
  EXPECT_THROW(parse("f(x)(y)"), ParseError);
  EXPECT_THROW(parse("x'"), ParseError);
  EXPECT_THROW(parse("f(x) + f(x, y)"), ParseError);
}

}  // namespace
}  // namespace liesym
