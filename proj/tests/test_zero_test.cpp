#include <gtest/gtest.h>

#include <cmath>

#include "liesym/catalog.hpp"

namespace liesym {
namespace {

TEST(ZeroTest, SourceEquationHolds) {
  SourceEquation src = SourceEquation::symbolic();
  Expression e = differentiate(src.du(1), Symbol::independent()) + src.q * src.u;
  EXPECT_TRUE(is_zero(e, src.rules, src.zero_options()));
  EXPECT_EQ(zero_test(e, src.rules, src.zero_options()).status, ZeroStatus::symbolic_zero);
}

TEST(ZeroTest, OneIsNotZero) {
  EXPECT_FALSE(is_zero(Expression(1), {}));
  EXPECT_EQ(zero_test(Expression(1)).status, ZeroStatus::nonzero);
}

TEST(ZeroTest, Wronskian) {
  SourceEquation src = SourceEquation::symbolic();
  Expression e = src.u * src.du(2) - src.du(1) * src.v - 1;
  EXPECT_TRUE(is_zero(e, src.rules, src.zero_options()));
}

TEST(ZeroTest, NumericFallbackForOpaqueIdentities) {
  Expression x = Symbol::independent();
  Expression f = Expression::apply("f", {x});
  EXPECT_EQ(zero_test(f * f - f * f).status, ZeroStatus::symbolic_zero);
  EXPECT_EQ(zero_test(f - Expression::apply("f", {x + 1})).status, ZeroStatus::nonzero);

  NumericModel model{"exp", {}};
  model.functions["E"] = [](const std::vector<double>& a, const std::vector<int>&) { return std::exp(a[0]); };
  ZeroTestOptions options;
  options.models = {model};
  Expression e = Expression::apply("E", {2 * x}) - pow(Expression::apply("E", {x}), 2);
  EXPECT_EQ(zero_test(e, {}, options).status, ZeroStatus::numeric_zero);
}

TEST(ZeroTest, Deterministic) {
  Expression x = Symbol::independent();
  Expression e = Expression::apply("g", {x}) - Expression::apply("g", {x * x});
  auto a = zero_test(e), b = zero_test(e);
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.max_residual, b.max_residual);
}

TEST(Evaluate, PolesReturnNothing) {
  Expression x = Symbol::independent();
  EXPECT_FALSE(evaluate(1 / (x - 1), {{Symbol::independent(), 1.0}}).has_value());
  EXPECT_DOUBLE_EQ(*evaluate(x * x + 1, {{Symbol::independent(), 2.0}}), 5.0);
}

}  // namespace
}  // namespace liesym
