#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "liesym/jet.hpp"
#include "liesym/zero_test.hpp"

namespace liesym::testing {

// Random expressions over x, y, y', a parameter and one opaque function.
class ExpressionGenerator {
 public:
  explicit ExpressionGenerator(std::uint64_t seed, bool with_functions = true)
      : rng_(seed), with_functions_(with_functions) {}

  Expression atom();
  Expression small_constant();
  Expression polynomial(int terms, int max_degree);
  // Sums, products, quotients by positive denominators and small powers.
  Expression expression(int depth);
  // Components in x and y only, polynomial or with an opaque f(x) factor.
  VectorField point_field(int m = 1, int max_degree = 2);

  std::mt19937_64& rng() { return rng_; }

 private:
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::mt19937_64 rng_;
  bool with_functions_;
};

// Symbols the generator draws from, in a fixed order.
std::vector<Symbol> generator_symbols();

// Sampled numeric point over the generator symbols.
NumericPoint sample_point(std::mt19937_64& rng);

// Numeric zero verdict from direct evaluation at `samples` points: every
// finite value below tolerance * max(1, scale).
bool numerically_zero(const Expression& e, std::uint64_t seed, int samples = 20, double tolerance = 1e-8,
                      const NumericModel& model = {});

}  // namespace liesym::testing
