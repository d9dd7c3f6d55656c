// Acceptance criteria, one PASS/FAIL line each.
#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "liesym/classify.hpp"
#include "liesym_cli/cli.hpp"
#include "oracles.hpp"
#include "properties.hpp"

namespace {

using namespace liesym;

// Pinned parameters.
constexpr double kTolerance = 1e-8;
constexpr std::uint64_t kSeed = 0;
constexpr int kPropertyCases = 1000;
constexpr int kOracleDegreeCap = 4;
constexpr double kTimeBudgetSeconds = 10.0;

const Symbol kX = Symbol::independent();
Expression X() { return kX; }
Expression Y(int j = 1) { return Symbol::dependent(j); }

struct Check {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

ZeroTestOptions pinned(std::vector<NumericModel> models = {}) {
  ZeroTestOptions o;
  o.seed = kSeed;
  o.tolerance = kTolerance;
  o.models = std::move(models);
  return o;
}

bool symbolically_zero(const Expression& e, const std::vector<RewriteRule>& rules) {
  return zero_test(e, rules, pinned()).status == ZeroStatus::symbolic_zero;
}

Check free_fall_suite() {
  Check c;
  OdeSystem sys = free_fall_system();
  auto fields = free_fall_symmetries();
  auto names = free_fall_names();
  c.require(fields.size() == 8, "expected 8 generators");
  int non_cartan = 0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    InvarianceReport r = invariance_residual(fields[i], sys, kSeed);
    for (const auto& t : r.tests) c.require(t.status == ZeroStatus::symbolic_zero, names[i] + " residual not symbolic zero");
    non_cartan += is_non_cartan(fields[i]) ? 1 : 0;
  }
  c.require(non_cartan == 2, "non-Cartan count " + std::to_string(non_cartan));
  c.detail = c.ok ? "8/8 symbolic-zero, 2 non-Cartan" : c.detail;
  return c;
}

Check theorem_one_suite() {
  Check c;
  SourceEquation src = SourceEquation::symbolic();
  for (int m = 1; m <= 3; ++m) {
    OdeSystem sys = isotropic_system(src, m, 2);
    auto gens = non_cartan_generators(m, src);
    c.require(gens.size() == static_cast<std::size_t>(2 * m), "wrong generator count");
    for (const auto& g : gens) {
      c.require(invariance_residual(g, sys, kSeed).all_zero(), "invariance fails at m=" + std::to_string(m));
    }
    for (std::size_t i = 0; i < gens.size(); ++i) {
      for (std::size_t j = i + 1; j < gens.size(); ++j) {
        VectorField br = commutator(gens[i], gens[j]);
        for (std::size_t k = 0; k < br.size(); ++k) {
          c.require(symbolically_zero(br.component(k), src.rules), "bracket not symbolic zero at m=" + std::to_string(m));
        }
      }
    }
  }
  if (c.ok) c.detail = "m = 1, 2, 3: invariant, C(2m,2) brackets symbolic-zero";
  return c;
}

Check dimension_count() {
  Check c;
  SourceEquation src = SourceEquation::symbolic();
  std::string counts;
  for (int m = 1; m <= 3; ++m) {
    auto all = canonical_basis(m, 2, src);
    auto nc = non_cartan_generators(m, src);
    all.insert(all.end(), nc.begin(), nc.end());
    std::size_t expected = static_cast<std::size_t>(m * m + 4 * m + 3);
    c.require(all.size() == expected, "count mismatch at m=" + std::to_string(m));
    LieAlgebraReport r = algebra_report(all, src.rules);
    c.require(r.independent && r.rank == expected, "dependent fields at m=" + std::to_string(m));
    counts += (counts.empty() ? "" : ", ") + std::to_string(r.rank);
  }
  if (c.ok) c.detail = "independent ranks " + counts;
  return c;
}

Check proposition_one() {
  Check c;
  auto fields = free_fall_symmetries();
  for (const auto& nt : testing::equivalence_transformations()) {
    int count = 0;
    for (const auto& v : fields) count += is_non_cartan(change_coordinates(v, nt.t)) ? 1 : 0;
    c.require(count == 2, nt.name + ": " + std::to_string(count) + " non-Cartan");
  }
  if (c.ok) c.detail = "3 transformations, exactly 2 non-Cartan each";
  return c;
}

Check lemma_one() {
  Check c;
  auto fields = free_fall_symmetries();
  int pairs = 0;
  for (const auto& nt : testing::linear_equivalence_transformations()) {
    std::vector<VectorField> pushed;
    for (const auto& v : fields) {
      pushed.push_back(change_coordinates(v, nt.t));
      c.require(is_non_cartan(pushed.back()) == is_non_cartan(v), nt.name + ": non-Cartan status changed");
    }
    ZeroTestOptions options = pinned(nt.t.models);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      for (std::size_t j = i + 1; j < fields.size(); ++j) {
        VectorField lhs = change_coordinates(commutator(fields[i], fields[j]), nt.t);
        VectorField rhs = commutator(pushed[i], pushed[j]);
        for (std::size_t k = 0; k < lhs.size(); ++k) {
          c.require(is_zero(lhs.component(k) - rhs.component(k), nt.t.rules, options), nt.name + ": bracket mismatch");
        }
        ++pairs;
      }
    }
  }
  if (c.ok) c.detail = "3 transformations, " + std::to_string(pairs) + " bracket pairs";
  return c;
}

Check iterative_machinery() {
  Check c;
  Expression r = Expression::apply("r", {X()});
  Expression s = normalize_s(r, 2);
  c.require(s == -differentiate(r, kX) / 2, "normalize_s at n = 2");
  auto coeffs = iterative_coefficients(IterativeOperator{r, s}, 2);
  c.require(coeffs[1].is_zero(), "y' coefficient of Omega^2 survives");
  SourceEquation src = SourceEquation::symbolic();
  c.require(normal_form_coeffs(src, 2).coeffs == std::vector<Expression>{src.q}, "A_2^2 != q");
  for (int n : {3, 4}) {
    auto a = normal_form_coeffs(src, n).coeffs;
    for (const auto& sk : source_solution_basis(src, n)) {
      std::vector<Expression> d{sk};
      for (int k = 1; k <= n; ++k) d.push_back(differentiate(d.back(), kX));
      Expression lhs = d[static_cast<std::size_t>(n)];
      for (int j = 2; j <= n; ++j) lhs += a[static_cast<std::size_t>(j - 2)] * d[static_cast<std::size_t>(n - j)];
      c.require(symbolically_zero(lhs, src.rules), "s_k fails at n=" + std::to_string(n));
    }
  }
  if (c.ok) c.detail = "s = -r'/2, [q], n = 3, 4 bases symbolic-zero";
  return c;
}

Check nonlinear_family() {
  Check c;
  auto [c1, c2] = scalar_non_cartan(SourceEquation::trivial());
  OdeSystem family = non_cartan_family("H");
  OdeSystem counter = nonlinear_counterexample();
  for (const auto* sys : {&family, &counter}) {
    c.require(invariance_residual(c1, *sys, kSeed).all_zero(), "C1 residual nonzero");
    c.require(invariance_residual(c2, *sys, kSeed).all_zero(), "C2 residual nonzero");
  }
  c.require(!cubic_in_p_test(counter.rhs[0]), "counterexample passes the cubic test");
  if (c.ok) c.detail = "C1, C2 zero on both; cubic test false";
  return c;
}

Check determining_fixture() {
  Check c;
  Expression A = Expression::apply("A", {X()}), B = Expression::apply("B", {X()}), Cc = Expression::apply("C", {X()});
  DeterminingSystem full = determining_system_2x2(A, B, Cc, false);
  auto reference = testing::trace_free_reference_block();
  int matched = 0;
  for (const auto& line : reference) {
    bool found = false;
    for (const auto& e : full.equations) found = found || testing::proportional(e, line);
    c.require(found, "unmatched line " + to_string(line, PrintOptions::y_w()));
    matched += found ? 1 : 0;
  }
  c.require(full.equations.size() >= 3 && full.equations[0] == reference[0] && full.equations[1] == reference[1] &&
                full.equations[2] == reference[2],
            "leading equations differ");

  // Restricted slice with phi = (alpha' w + k) y + S(x, w).
  DeterminingSystem restricted = determining_system_2x2(A, B, Cc, true);
  const Symbol y = Symbol::dependent(1), w = Symbol::dependent(2);
  Expression alpha = Expression::apply("alpha", {X()});
  Expression dalpha = differentiate(alpha, kX);
  Expression phi_body = (dalpha * Y(2) + Expression(Symbol::parameter("k"))) * Y(1) + Expression::apply("S", {X(), Y(2)});
  Expression target = -2 * Cc * Y(1) * alpha + 2 * Y(2) * (A * alpha + differentiate(dalpha, kX));
  bool slice = false;
  for (const auto& e : restricted.equations) {
    slice = slice || testing::proportional(testing::instantiate(e, "phi", phi_body, {kX, y, w}), target);
  }
  c.require(slice, "restricted slice -2Cy alpha + 2w(A alpha + alpha'') not found");
  if (c.ok) c.detail = std::to_string(matched) + "/15 reference lines, restricted slice found";
  return c;
}

Check classification() {
  Check c;
  ClassificationVerdict bad = classify_linear_system(LinearSystemSpec::second_order({{1, 0}, {2, 1}}));
  c.require(!bad.in_canonical_class, "[[1,0],[2,1]] classified in class");
  Expression q = Expression::apply("q", {X()});
  for (int m : {2, 3}) {
    ExpressionMatrix a0(static_cast<std::size_t>(m), std::vector<Expression>(static_cast<std::size_t>(m)));
    for (int i = 0; i < m; ++i) a0[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = q;
    LinearSystemSpec spec = LinearSystemSpec::second_order(a0);
    ClassificationVerdict v = classify_linear_system(spec);
    c.require(v.in_canonical_class && v.witness.size() == static_cast<std::size_t>(2 * m), "q I not in class");
    SourceEquation src = SourceEquation::symbolic();
    OdeSystem sys = spec.to_system(src.rules, src.models);
    for (const auto& w : v.witness) c.require(invariance_residual(w, sys, kSeed).all_zero(), "witness fails");
  }
  int agree = 0;
  auto corpus = testing::trace_free_corpus();
  for (const auto& t : corpus) {
    bool engine = non_cartan_existence_2x2(t.A, t.B, t.C).in_canonical_class;
    bool oracle = testing::restricted_ansatz_search(t.A, t.B, t.C, kOracleDegreeCap, 3).non_cartan_found;
    c.require(engine == oracle, "disagreement on " + t.name);
    agree += engine == oracle ? 1 : 0;
  }
  if (c.ok) c.detail = "verdicts ok, oracle agrees on " + std::to_string(agree) + "/" + std::to_string(corpus.size());
  return c;
}

Check engine_properties() {
  Check c;
  using testing::PropertyOutcome;
  const std::pair<const char*, PropertyOutcome> suites[] = {
      {"normalize idempotence", testing::normalize_idempotence(kPropertyCases, kSeed)},
      {"differentiate linearity", testing::differentiate_linearity(kPropertyCases, kSeed + 1)},
      {"product rule", testing::differentiate_product_rule(kPropertyCases, kSeed + 2)},
      {"commutator antisymmetry", testing::commutator_antisymmetry(kPropertyCases, kSeed + 5)},
      {"Jacobi identity", testing::jacobi_identity(kPropertyCases, kSeed + 6)},
      {"zero-test agreement", testing::zero_test_agreement(kPropertyCases, kSeed)},
  };
  for (const auto& [name, outcome] : suites) {
    c.require(outcome.ok() && outcome.cases >= kPropertyCases,
              std::string(name) + ": " + std::to_string(outcome.failures) + " failures, e.g. " + outcome.first_failure);
  }
  if (c.ok) c.detail = "6 suites x 1000 cases";
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Check cli_classify() {
  Check c;
  const struct {
    const char* system;
    int exit_code;
    const char* golden;
  } cases[] = {
      {"y1''+y1+0*y2=0; y2''+2*y1+y2=0", 1, "classify_non_isotropic.json"},
      {"y1''+q(x)*y1=0; y2''+q(x)*y2=0", 0, "classify_isotropic.json"},
      {"eq14", 1, "classify_eq14.json"},
  };
  for (const auto& k : cases) {
    std::vector<std::string> args{"classify", "--system", k.system, "--format", "json", "--seed", "0"};
    std::ostringstream out1, out2, err;
    int code1 = cli::run(args, out1, err);
    int code2 = cli::run(args, out2, err);
    c.require(code1 == k.exit_code && code2 == k.exit_code, std::string(k.system) + ": exit " + std::to_string(code1));
    c.require(out1.str() == out2.str(), std::string(k.system) + ": output differs between runs");
    c.require(out1.str() == read_file(std::string(LIESYM_GOLDEN_DIR) + "/" + k.golden),
              std::string(k.system) + ": output differs from the recorded report");
  }
  if (c.ok) c.detail = "exit codes 1, 0, 1; JSON byte-stable";
  return c;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Check()>> criteria[] = {
      {"free-fall suite", free_fall_suite},
      {"Theorem 1 suite", theorem_one_suite},
      {"dimension count", dimension_count},
      {"equivalence push-forward", proposition_one},
      {"coordinate-free non-Cartan property", lemma_one},
      {"iterative machinery", iterative_machinery},
      {"nonlinear family", nonlinear_family},
      {"determining system fixture", determining_fixture},
      {"classification", classification},
      {"engine properties", engine_properties},
      {"CLI classify", cli_classify},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    auto start = std::chrono::steady_clock::now();
    Check c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > kTimeBudgetSeconds) {
      c.ok = false;
      c.detail += " (over the time budget)";
    }
    failures += c.ok ? 0 : 1;
    std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << index << " (" << name << "): " << c.detail << " ["
              << std::fixed << std::setprecision(2) << seconds << "s]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
