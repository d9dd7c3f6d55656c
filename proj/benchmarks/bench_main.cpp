#include <benchmark/benchmark.h>

#include "liesym/catalog.hpp"
#include "liesym/classify.hpp"
#include "liesym/jet.hpp"
#include "liesym/parser.hpp"
#include "liesym/symmetry.hpp"

namespace liesym {
namespace {

void BM_ParseNormalize(benchmark::State& state) {
  const char* text = "(x + y)^3*(x - y)^2/(x^2 + 2*x + 1) + f(x)*(y + 1)^2 - (x*y + 1)^4";
  for (auto _ : state) benchmark::DoNotOptimize(normalize(parse(text)));
}
BENCHMARK(BM_ParseNormalize);

void BM_Prolong(benchmark::State& state) {
  JetContext ctx(2, 2);
  VectorField v = general_ansatz(ctx, {"xi", "phi1", "phi2"});
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(prolong(v, order));
}
BENCHMARK(BM_Prolong)->DenseRange(1, 3);

void BM_FreeFallDetermining(benchmark::State& state) {
  OdeSystem sys = free_fall_system();
  VectorField v = general_ansatz(JetContext(1, 2), {"xi", "phi"});
  for (auto _ : state) benchmark::DoNotOptimize(determining_equations(sys, v));
}
BENCHMARK(BM_FreeFallDetermining);

void BM_TraceFreeDetermining(benchmark::State& state) {
  Expression A = Expression::apply("A", {Symbol::independent()});
  Expression B = Expression::apply("B", {Symbol::independent()});
  Expression C = Expression::apply("C", {Symbol::independent()});
  for (auto _ : state) benchmark::DoNotOptimize(determining_system_2x2(A, B, C, true));
}
BENCHMARK(BM_TraceFreeDetermining);

void BM_NormalFormCoeffs(benchmark::State& state) {
  SourceEquation src = SourceEquation::symbolic();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(normal_form_coeffs(src, n));
}
BENCHMARK(BM_NormalFormCoeffs)->DenseRange(2, 4);

void BM_InvarianceResidual(benchmark::State& state) {
  OdeSystem sys = isotropic_system(SourceEquation::symbolic(), 2, 3);
  std::vector<VectorField> basis = canonical_basis(2, 3, SourceEquation::symbolic());
  for (auto _ : state) {
    for (const auto& v : basis) benchmark::DoNotOptimize(invariance_residual(v, sys));
  }
}
BENCHMARK(BM_InvarianceResidual)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace liesym

BENCHMARK_MAIN();
