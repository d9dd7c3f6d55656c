#include <gtest/gtest.h>

#include "liesym/errors.hpp"
#include "liesym/jet.hpp"
#include "liesym/parser.hpp"

namespace liesym {
namespace {

const JetContext kScalar(1, 2);

Expression X() { return Symbol::independent(); }
Expression Y() { return Symbol::dependent(1); }
Expression J(int k) { return Symbol::jet(1, k); }

TEST(TotalDerivative, Basics) {
  EXPECT_EQ(total_derivative(Y(), kScalar), J(1));
  EXPECT_EQ(total_derivative(X() * J(1), kScalar), J(1) + X() * J(2));
}

TEST(TotalDerivative, OpaqueCoefficient) {
  Expression u = Expression::apply("u", {X()});
  Expression du = Expression::apply(Symbol::function("u", std::vector<int>{1}), {X()});
  EXPECT_EQ(total_derivative(u * Y() * Y(), kScalar), du * Y() * Y() + 2 * u * Y() * J(1));
}

TEST(TotalDerivative, RejectsJetsBeyondContext) {
  EXPECT_THROW(total_derivative(J(4), kScalar), ContextMismatchError);
  EXPECT_THROW(total_derivative(Expression(Symbol::dependent(2)), kScalar), ContextMismatchError);
}

TEST(Prolong, TranslationInY) {
  VectorField v(kScalar, 0, {X()});
  EXPECT_EQ(prolong(v, 1).coefficient(1, 1), Expression(1));
}

TEST(Prolong, YDx) {
  VectorField v(kScalar, Y(), {0});
  ProlongedField pr = prolong(v, 2);
  EXPECT_EQ(pr.coefficient(1, 1), -J(1) * J(1));
  EXPECT_EQ(pr.coefficient(1, 2), -3 * J(1) * J(2));
}

TEST(Prolong, Scaling) {
  VectorField v(kScalar, 2 * X(), {Y()});
  EXPECT_EQ(prolong(v, 2).coefficient(1, 2), -3 * J(2));
}

TEST(Prolong, OrderCap) {
  VectorField v(kScalar, Y(), {0});
  EXPECT_THROW(prolong(v, kDefaultMaxProlongation + 1), Error);
  VectorField w(JetContext(1, 5), Y(), {0});
  EXPECT_NO_THROW(prolong(w, 5, 5));
}

TEST(VectorField, PointFieldsOnly) {
  EXPECT_THROW(VectorField(kScalar, J(1), {0}), Error);
  EXPECT_THROW(VectorField(kScalar, 0, {0, 0}), Error);
}

TEST(VectorField, ArithmeticAndPrinting) {
  VectorField a(kScalar, Y(), {0}), b(kScalar, X() * Y(), {Y() * Y()});
  EXPECT_EQ(to_string(a + b), "(x*y + y)*dx + y^2*dy");
  EXPECT_EQ(to_string(a - a), "0");
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_EQ(to_string(VectorField(kScalar, -1, {0})), "-dx");
  auto comps = parse_field_components(to_string(a + b), 1);
  EXPECT_EQ(comps[0], (a + b).xi());
  EXPECT_EQ(comps[1], (a + b).phi()[0]);
}

TEST(VectorField, Apply) {
  VectorField v(kScalar, X() * X(), {X() * Y()});
  EXPECT_EQ(v.apply(Y() / X()), X() * Y() / X() - X() * X() * Y() / (X() * X()));
  EXPECT_TRUE(v.apply(Y() / X()).is_zero());
}

}  // namespace
}  // namespace liesym
