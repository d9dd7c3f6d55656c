#include "liesym_cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "liesym/classify.hpp"
#include "liesym/errors.hpp"
#include "liesym_cli/catalog_keys.hpp"

namespace liesym::cli {
namespace {

using json = nlohmann::json;

enum class Format { text, json };

struct Common {
  std::string format = "text";
  std::uint64_t seed = 0;
  Format fmt() const { return format == "json" ? Format::json : Format::text; }
};

// Counts of zero-test outcomes, reported in engine-info.
struct ModeTally {
  std::map<std::string, int> counts{{"symbolic-zero", 0}, {"numeric-zero", 0}, {"nonzero", 0}};
  void add(ZeroStatus s) { ++counts[to_string(s)]; }
};

struct Report {
  std::string command;
  json inputs = json::object();
  json results = json::array();
  std::ostringstream text;
  ModeTally modes;
  bool passed = true;
};

std::string read_input(const std::string& text) {
  std::error_code ec;
  if (text.size() < 4096 && std::filesystem::is_regular_file(text, ec)) {
    std::ifstream in(text, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }
  return text;
}

bool is_system_key(const std::string& text) {
  static const std::set<std::string> names{"free-fall", "eq13", "eq14", "eq16", "isotropic"};
  return names.count(text.substr(0, text.find(':'))) > 0;
}

struct ResolvedSystem {
  OdeSystem sys;
  std::string source;
  std::optional<std::array<Expression, 3>> trace_free;  // A, B, C of an eq16 key
};

ResolvedSystem resolve_system_input(const std::string& raw, int m) {
  std::string text = read_input(raw);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
  if (is_system_key(text)) {
    CatalogKey key = CatalogKey::parse(text);
    if (m > 0 && !key.params.count("m")) key.params["m"] = std::to_string(m);
    ResolvedSystem out{*resolve_system(key), key.text(), std::nullopt};
    if (key.name == "eq16") {
      const auto& rhs = out.sys.rhs;
      Collected c0 = collect(rhs[0], std::vector<Symbol>{Symbol::dependent(1), Symbol::dependent(2)});
      Collected c1 = collect(rhs[1], std::vector<Symbol>{Symbol::dependent(1), Symbol::dependent(2)});
      auto coeff = [](const Collected& c, int index) {
        for (const auto& [mono, value] : c) {
          if (mono.size() == 1 && mono[0].exponent == 1 && mono[0].atom == Atom(Symbol::dependent(index))) return value;
        }
        return Expression(0);
      };
      out.trace_free = std::array<Expression, 3>{coeff(c0, 1), coeff(c0, 2), coeff(c1, 1)};
    }
    return out;
  }
  return ResolvedSystem{parse_system(text, m), text, std::nullopt};
}

PrintOptions print_options(int m) { return m == 2 ? PrintOptions::y_w() : PrintOptions::for_dimension(m); }

std::string jet_name(int index, int order, const PrintOptions& po) {
  return to_string(Expression(Symbol::jet(index, order)), po);
}

json system_json(const OdeSystem& sys, const std::string& source, const PrintOptions& po) {
  json eqs = json::array();
  for (std::size_t j = 0; j < sys.rhs.size(); ++j) {
    eqs.push_back(jet_name(static_cast<int>(j) + 1, sys.ctx.order, po) + " = " + to_string(sys.rhs[j], po));
  }
  return json{{"source", source}, {"m", sys.ctx.m}, {"order", sys.ctx.order}, {"equations", eqs}};
}

void print_system(std::ostream& os, const OdeSystem& sys, const PrintOptions& po) {
  for (std::size_t j = 0; j < sys.rhs.size(); ++j) {
    os << "  " << jet_name(static_cast<int>(j) + 1, sys.ctx.order, po) << " = " << to_string(sys.rhs[j], po) << '\n';
  }
}

void merge_into(OdeSystem& sys, const std::vector<RewriteRule>& rules, const std::vector<NumericModel>& models) {
  sys.rules.insert(sys.rules.end(), rules.begin(), rules.end());
  if (!models.empty()) {
    // Source models fix the opaque source functions consistently; the
    // system's own models are dropped when they only hold the generic default.
    std::vector<NumericModel> merged = models;
    for (const auto& m : sys.models) {
      if (!m.functions.empty()) merged.push_back(m);
    }
    sys.models = std::move(merged);
  }
}

void fill_catalog_dims(CatalogKey& key, int m, int n) {
  if (m > 0) key.params["m"] = std::to_string(m);
  if (n > 0) key.params["n"] = std::to_string(n);
}

json engine_info(const Common& common, const ModeTally& modes) {
  ZeroTestOptions defaults;
  return json{{"seed", common.seed},
              {"samples", defaults.samples},
              {"tolerance", defaults.tolerance},
              {"zero-test-modes", modes.counts}};
}

int emit(const Report& report, const Common& common, std::ostream& out) {
  if (common.fmt() == Format::json) {
    json doc{{"command", report.command},
             {"inputs", report.inputs},
             {"results", report.results},
             {"engine-info", engine_info(common, report.modes)}};
    out << doc.dump(2) << '\n';
  } else {
    out << report.text.str();
    out << "seed " << common.seed << '\n';
  }
  return report.passed ? kPass : kCheckFailed;
}

VectorField parse_generator(const std::string& raw, const JetContext& ctx) {
  std::string text = read_input(raw);
  auto comps = parse_field_components(text, ctx.m);
  Expression xi = comps[0];
  comps.erase(comps.begin());
  VectorField v(ctx, xi, comps);
  for (std::size_t i = 0; i < v.size(); ++i) ctx.check(v.component(i));
  return v;
}

// verify ---------------------------------------------------------------------

struct VerifyArgs {
  std::string system;
  std::vector<std::string> generators;
  std::string catalog;
  int m = 0;
  int n = 0;
};

int cmd_verify(const VerifyArgs& args, const Common& common, std::ostream& out) {
  ResolvedSystem rs = resolve_system_input(args.system, args.m);
  OdeSystem sys = rs.sys;
  PrintOptions po = print_options(sys.ctx.m);

  std::vector<std::string> names;
  std::vector<VectorField> fields;
  std::string catalog_key;
  if (!args.catalog.empty()) {
    CatalogKey key = CatalogKey::parse(args.catalog);
    if (!key.params.count("m")) key.params["m"] = std::to_string(sys.ctx.m);
    if (!key.params.count("n") && key.name == "canonical") key.params["n"] = std::to_string(sys.ctx.order);
    fill_catalog_dims(key, args.m, args.n);
    FieldSet set = resolve_fields(key);
    catalog_key = set.key;
    names = set.names;
    fields = set.fields;
    merge_into(sys, set.rules, set.models);
  }
  for (std::size_t i = 0; i < args.generators.size(); ++i) {
    names.push_back("G" + std::to_string(i + 1));
    fields.push_back(parse_generator(args.generators[i], sys.ctx));
  }
  if (fields.empty()) throw Error("verify needs --generator or --catalog");
  for (const auto& v : fields) {
    if (!(v.context() == sys.ctx) && v.context().m != sys.ctx.m) {
      throw ContextMismatchError("generator dimension does not match the system");
    }
  }

  Report report;
  report.command = "verify";
  report.inputs["system"] = system_json(sys, rs.source, po);
  if (!catalog_key.empty()) report.inputs["catalog"] = catalog_key;
  json gens = json::array();
  for (std::size_t i = 0; i < fields.size(); ++i) {
    gens.push_back(json{{"name", names[i]}, {"field", to_string(fields[i], po)}});
  }
  report.inputs["generators"] = gens;

  report.text << "system " << rs.source << '\n';
  print_system(report.text, sys, po);
  std::size_t passed = 0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const VectorField& v = fields[i];
    // Re-express over the system's jet order.
    VectorField field(sys.ctx, v.xi(), v.phi());
    InvarianceReport inv = invariance_residual(field, sys, common.seed);
    json residuals = json::array();
    for (std::size_t j = 0; j < inv.residuals.size(); ++j) {
      report.modes.add(inv.tests[j].status);
      residuals.push_back(json{{"equation", j + 1},
                               {"residual", to_string(inv.residuals[j], po)},
                               {"status", to_string(inv.tests[j].status)}});
    }
    bool ok = inv.all_zero();
    passed += ok ? 1 : 0;
    report.passed = report.passed && ok;
    report.results.push_back(json{{"generator", names[i]},
                                  {"field", to_string(field, po)},
                                  {"non-cartan", is_non_cartan(field)},
                                  {"pass", ok},
                                  {"residuals", residuals}});
    report.text << (ok ? "PASS " : "FAIL ") << names[i] << ": " << to_string(field, po)
                << (is_non_cartan(field) ? "  [non-Cartan]" : "") << '\n';
    for (std::size_t j = 0; j < inv.residuals.size(); ++j) {
      report.text << "  residual " << j + 1 << " = " << to_string(inv.residuals[j], po) << "  ("
                  << to_string(inv.tests[j].status) << ")\n";
    }
  }
  report.text << passed << "/" << fields.size() << " pass\n";
  return emit(report, common, out);
}

// determining ----------------------------------------------------------------

// Splits on commas outside parentheses and brackets.
std::vector<std::string> split_top_level(const std::string& text) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string current;
  for (char c : text) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\n\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\n\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> default_names(int m) {
  if (m == 1) return {"xi", "phi"};
  if (m == 2) return {"xi", "eta", "phi"};
  std::vector<std::string> names{"xi"};
  for (int j = 1; j <= m; ++j) names.push_back("phi" + std::to_string(j));
  return names;
}

// "xi=..., phi=..." with component keys xi, phi (m = 1), eta/phi (m = 2) or phi1..phim.
std::optional<VectorField> parse_component_ansatz(const std::string& text, const JetContext& ctx) {
  auto parts = split_top_level(text);
  std::map<std::string, std::string> entries;
  for (const auto& part : parts) {
    auto eq = part.find('=');
    if (eq == std::string::npos) return std::nullopt;
    std::string key = trim(part.substr(0, eq));
    if (entries.count(key)) throw ParseError("duplicate ansatz component '" + key + "'", 0);
    entries[key] = part.substr(eq + 1);
  }
  std::map<std::string, int> slot;
  slot["xi"] = 0;
  if (ctx.m == 1) slot["phi"] = 1;
  if (ctx.m == 2) {
    slot["eta"] = 1;
    slot["phi"] = 2;
  }
  for (int j = 1; j <= ctx.m; ++j) slot["phi" + std::to_string(j)] = j;
  std::vector<Expression> comps(static_cast<std::size_t>(ctx.m) + 1, Expression(0));
  std::vector<bool> seen(comps.size(), false);
  for (const auto& [key, value] : entries) {
    auto it = slot.find(key);
    if (it == slot.end()) throw ParseError("unknown ansatz component '" + key + "'", 0);
    if (seen[it->second]) throw ParseError("component '" + key + "' given twice", 0);
    seen[it->second] = true;
    comps[it->second] = parse(value, ParseOptions{ctx.m});
  }
  Expression xi = comps[0];
  comps.erase(comps.begin());
  VectorField v(ctx, xi, comps);
  for (std::size_t i = 0; i < v.size(); ++i) ctx.check(v.component(i));
  return v;
}

std::array<Expression, 3> trace_free_coefficients(const ResolvedSystem& rs) {
  if (rs.trace_free) return *rs.trace_free;
  auto spec = linear_spec(rs.sys);
  if (!spec || spec->m != 2 || spec->n != 2 || spec->forcing) {
    throw InapplicableError("restricted ansatz needs a homogeneous 2x2 second-order linear system");
  }
  for (std::size_t k = 1; k < spec->coefficients.size(); ++k) {
    for (const auto& row : spec->coefficients[k]) {
      for (const auto& e : row) {
        if (!e.is_zero()) throw InapplicableError("restricted ansatz needs a system in normal form");
      }
    }
  }
  const auto& a0 = spec->coefficients[0];
  Expression A = -a0[0][0], B = -a0[0][1], C = -a0[1][0], D = -a0[1][1];
  if (!is_zero(A + D, rs.sys.rules, rs.sys.zero_options())) {
    throw InapplicableError("restricted ansatz needs a trace-free system y'' = A y + B w, w'' = C y - A w");
  }
  return {A, B, C};
}

struct DeterminingArgs {
  std::string system;
  std::string ansatz = "full";
  int m = 0;
};

int cmd_determining(const DeterminingArgs& args, const Common& common, std::ostream& out) {
  ResolvedSystem rs = resolve_system_input(args.system, args.m);
  const OdeSystem& sys = rs.sys;
  PrintOptions po = print_options(sys.ctx.m);

  std::string ansatz_text = trim(read_input(args.ansatz));
  DeterminingSystem ds;
  std::string ansatz_shown;
  if (ansatz_text == "restricted") {
    auto [A, B, C] = trace_free_coefficients(rs);
    ds = determining_system_2x2(A, B, C, true);
    ansatz_shown = "xi = alpha(x)*y + beta(x)*w + gamma(x), eta(x, y, w), phi(x, y, w)";
  } else {
    VectorField ansatz = VectorField::zero(sys.ctx);
    if (ansatz_text == "full") {
      ansatz = general_ansatz(sys.ctx, default_names(sys.ctx.m));
    } else if (ansatz_text.find("dx") != std::string::npos || ansatz_text.find("dy") != std::string::npos ||
               ansatz_text.find("dw") != std::string::npos) {
      ansatz = parse_generator(ansatz_text, sys.ctx);
    } else if (auto v = parse_component_ansatz(ansatz_text, sys.ctx)) {
      ansatz = *v;
    } else {
      throw ParseError("unrecognized ansatz '" + ansatz_text + "'", 0);
    }
    ansatz_shown = to_string(ansatz, po);
    ds = determining_equations(sys, ansatz);
  }

  // Equation index -> (residual, monomial) keys that produced it.
  std::vector<std::vector<std::pair<std::size_t, std::string>>> sources(ds.equations.size());
  for (const auto& [key, idx] : ds.monomial_index) {
    std::string mono = key.second.empty() ? "1" : to_string(key.second, po);
    sources[idx].emplace_back(key.first + 1, mono);
  }

  Report report;
  report.command = "determining";
  report.inputs["system"] = system_json(sys, rs.source, po);
  report.inputs["ansatz"] = ansatz_shown;
  json unknowns = json::array();
  for (const auto& u : ds.unknowns) unknowns.push_back(u.name());
  report.inputs["unknowns"] = unknowns;

  report.text << "system " << rs.source << '\n';
  print_system(report.text, sys, po);
  report.text << "ansatz " << ansatz_shown << '\n';
  report.text << ds.equations.size() << " determining equations in";
  for (const auto& u : ds.unknowns) report.text << ' ' << u.name();
  report.text << '\n';
  for (std::size_t i = 0; i < ds.equations.size(); ++i) {
    json src = json::array();
    std::string src_text;
    for (const auto& [eq, mono] : sources[i]) {
      src.push_back(json{{"equation", eq}, {"monomial", mono}});
      if (!src_text.empty()) src_text += ", ";
      src_text += "eq " + std::to_string(eq) + " [" + mono + "]";
    }
    report.results.push_back(json{{"index", i + 1}, {"equation", to_string(ds.equations[i], po)}, {"sources", src}});
    report.text << "  (" << i + 1 << ") " << to_string(ds.equations[i], po) << " = 0    <- " << src_text << '\n';
  }
  return emit(report, common, out);
}

// classify -------------------------------------------------------------------

struct ClassifyArgs {
  std::string system;
  int m = 0;
};

int cmd_classify(const ClassifyArgs& args, const Common& common, std::ostream& out) {
  ResolvedSystem rs = resolve_system_input(args.system, args.m);
  const OdeSystem& sys = rs.sys;
  PrintOptions po = print_options(sys.ctx.m);

  Report report;
  report.command = "classify";
  report.inputs["system"] = system_json(sys, rs.source, po);
  report.text << "system " << rs.source << '\n';
  print_system(report.text, sys, po);

  auto spec = linear_spec(sys);
  if (spec && spec->n == 2) {
    ClassificationVerdict verdict = classify_linear_system(*spec);
    json witnesses = json::array();
    for (std::size_t i = 0; i < verdict.witness.size(); ++i) {
      witnesses.push_back(json{{"name", verdict.witness_names[i]}, {"field", to_string(verdict.witness[i], po)}});
    }
    report.passed = verdict.in_canonical_class;
    report.results.push_back(json{{"kind", "linear"},
                                  {"in-canonical-class", verdict.in_canonical_class},
                                  {"reason", verdict.reason},
                                  {"witnesses", witnesses}});
    report.text << (verdict.in_canonical_class ? "in canonical class" : "NOT in canonical class") << ": "
                << verdict.reason << '\n';
    for (std::size_t i = 0; i < verdict.witness.size(); ++i) {
      report.text << "  " << verdict.witness_names[i] << " = " << to_string(verdict.witness[i], po) << '\n';
    }
    return emit(report, common, out);
  }
  if (sys.ctx.m != 1 || sys.ctx.order != 2) {
    throw InapplicableError("classify supports linear second-order systems and scalar y'' = F");
  }

  const Expression& F = sys.rhs[0];
  bool cubic = cubic_in_p_test(F);
  Atom p(Symbol::jet(1, 1));
  std::optional<int> deg;
  try {
    deg = degree(F, p);
  } catch (const NotPolynomialError&) {
  }

  auto [c1, c2] = scalar_non_cartan(SourceEquation::trivial());
  std::vector<std::string> admitted, rejected;
  json checks = json::array();
  for (const auto& [name, v] : {std::pair<std::string, VectorField>{"C1", c1}, {"C2", c2}}) {
    VectorField field(sys.ctx, v.xi(), v.phi());
    InvarianceReport inv = invariance_residual(field, sys, common.seed);
    report.modes.add(inv.tests[0].status);
    bool ok = inv.all_zero();
    (ok ? admitted : rejected).push_back(name);
    checks.push_back(json{{"generator", name},
                          {"field", to_string(field, po)},
                          {"residual", to_string(inv.residuals[0], po)},
                          {"status", to_string(inv.tests[0].status)},
                          {"pass", ok}});
  }

  auto join = [](const std::vector<std::string>& xs) {
    std::string s;
    for (const auto& x : xs) s += (s.empty() ? "" : ", ") + x;
    return s;
  };
  std::string summary;
  if (rejected.empty()) {
    summary = "admits non-Cartan symmetries " + join(admitted);
  } else if (admitted.empty()) {
    summary = "does not admit non-Cartan symmetries " + join(rejected);
  } else {
    summary = "admits non-Cartan symmetry " + join(admitted) + " but not " + join(rejected);
  }
  if (cubic) {
    summary += "; cubic in p (linearization not excluded)";
  } else if (deg) {
    summary += "; NOT linearizable (degree-" + std::to_string(*deg) + " in p)";
  } else {
    summary += "; NOT linearizable (not polynomial in p)";
  }
  report.passed = cubic && rejected.empty();
  json result{{"kind", "scalar"}, {"cubic-in-p", cubic}, {"non-cartan-checks", checks}, {"summary", summary}};
  result["degree-in-p"] = deg ? json(*deg) : json(nullptr);
  report.results.push_back(result);
  report.text << summary << '\n';
  return emit(report, common, out);
}

// catalog / commutators ------------------------------------------------------

std::string span_combination(const std::vector<Rational>& coeffs, const std::vector<std::string>& names, bool negate) {
  std::string value;
  for (std::size_t l = 0; l < coeffs.size(); ++l) {
    Rational c = negate ? Rational(-coeffs[l]) : coeffs[l];
    if (c == 0) continue;
    Rational mag = abs(c);
    std::string coef = mag == 1 ? "" : to_string(mag) + "*";
    if (value.empty()) {
      value = (c < 0 ? "-" : "") + coef + names[l];
    } else {
      value += (c < 0 ? " - " : " + ") + coef + names[l];
    }
  }
  return value.empty() ? "0" : value;
}

void commutator_table(Report& report, const FieldSet& set, const PrintOptions& po) {
  LieAlgebraReport alg = algebra_report(set.fields, set.rules);
  const std::size_t k = set.fields.size();
  auto value = [&](std::size_t i, std::size_t j) -> std::string {
    if (i == j) return "0";
    const auto& sc = i < j ? alg.structure_constants[i][j] : alg.structure_constants[j][i];
    if (sc) return span_combination(*sc, set.names, i > j);
    VectorField br = commutator(set.fields[i], set.fields[j]);
    return to_string(br.map([&](const Expression& e) { return apply_rules(e, set.rules, true); }), po);
  };
  report.text << "commutators of " << set.key << " (rank " << alg.rank << (alg.closed ? ", closed" : ", not closed")
              << (alg.abelian ? ", abelian" : "") << ")\n";
  json table = json::array();
  for (std::size_t i = 0; i < k; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < k; ++j) {
      std::string v = value(i, j);
      row.push_back(v);
      if (i < j) report.text << "  [" << set.names[i] << ", " << set.names[j] << "] = " << v << '\n';
    }
    table.push_back(row);
  }
  json names = json::array();
  for (const auto& n : set.names) names.push_back(n);
  report.results.push_back(json{{"kind", "commutators"},
                                {"names", names},
                                {"rank", alg.rank},
                                {"independent", alg.independent},
                                {"closed", alg.closed},
                                {"abelian", alg.abelian},
                                {"non-cartan-count", alg.non_cartan_count},
                                {"table", table}});
}

void list_fields(Report& report, const FieldSet& set) {
  int m = set.fields.empty() ? 1 : set.fields[0].context().m;
  PrintOptions po = print_options(m);
  report.text << set.key << ": " << set.fields.size() << " generators\n";
  json fields = json::array();
  for (std::size_t i = 0; i < set.fields.size(); ++i) {
    bool nc = is_non_cartan(set.fields[i]);
    fields.push_back(json{{"name", set.names[i]}, {"field", to_string(set.fields[i], po)}, {"non-cartan", nc}});
    report.text << "  " << set.names[i] << " = " << to_string(set.fields[i], po) << (nc ? "  [non-Cartan]" : "")
                << '\n';
  }
  report.results.push_back(json{{"kind", "generators"}, {"generators", fields}});
}

struct CatalogArgs {
  std::string key;
  std::string set;
  int m = 0;
  int n = 0;
};

int cmd_catalog(const CatalogArgs& args, const Common& common, std::ostream& out) {
  CatalogKey key = CatalogKey::parse(args.key);
  fill_catalog_dims(key, args.m, args.n);
  Report report;
  report.command = "catalog";
  report.inputs["key"] = key.text();

  if (key.name == "normal-form-coeffs") {
    int n = key.integer("n", 2);
    if (n < 2 || n > 4) throw Error("n must lie in [2, 4]");
    SourceEquation src = source_for(key);
    NormalFormCoefficients nf = normal_form_coeffs(src, n);
    PrintOptions po = print_options(1);
    json coeffs = json::array();
    std::string line;
    for (std::size_t j = 0; j < nf.coeffs.size(); ++j) {
      std::string label = "A_" + std::to_string(n) + "^" + std::to_string(j + 2);
      std::string value = to_string(nf.coeffs[j], po);
      coeffs.push_back(json{{"name", label}, {"value", value}});
      line += (line.empty() ? "" : ", ") + label + " = " + value;
    }
    report.results.push_back(json{{"kind", "normal-form-coeffs"}, {"n", n}, {"coefficients", coeffs}});
    report.text << line << '\n';
    return emit(report, common, out);
  }
  if (key.name == "commutators") {
    if (args.set.empty()) throw Error("catalog commutators needs --set");
    CatalogKey set_key = CatalogKey::parse(args.set);
    fill_catalog_dims(set_key, args.m, args.n);
    FieldSet set = resolve_fields(set_key);
    report.inputs["set"] = set.key;
    commutator_table(report, set, print_options(set.fields.at(0).context().m));
    return emit(report, common, out);
  }
  if (auto sys = resolve_system(key)) {
    PrintOptions po = print_options(sys->ctx.m);
    report.results.push_back(json{{"kind", "system"}, {"system", system_json(*sys, key.text(), po)}});
    report.text << key.text() << ":\n";
    print_system(report.text, *sys, po);
    if (key.name != "free-fall") return emit(report, common, out);
  }
  list_fields(report, resolve_fields(key));
  return emit(report, common, out);
}

struct CommutatorArgs {
  std::string set;
  std::vector<std::string> generators;
  int m = 0;
  int n = 0;
};

int cmd_commutators(const CommutatorArgs& args, const Common& common, std::ostream& out) {
  Report report;
  report.command = "commutators";
  FieldSet set;
  if (!args.set.empty()) {
    CatalogKey key = CatalogKey::parse(args.set);
    fill_catalog_dims(key, args.m, args.n);
    set = resolve_fields(key);
  }
  JetContext ctx(args.m > 0 ? args.m : (set.fields.empty() ? 1 : set.fields[0].context().m), 2);
  for (std::size_t i = 0; i < args.generators.size(); ++i) {
    set.names.push_back("G" + std::to_string(i + 1));
    set.fields.push_back(parse_generator(args.generators[i], ctx));
  }
  if (set.fields.empty()) throw Error("commutators needs --set or --generator");
  if (set.key.empty()) set.key = "generators";
  PrintOptions po = print_options(set.fields[0].context().m);
  report.inputs["set"] = set.key;
  json gens = json::array();
  for (std::size_t i = 0; i < set.fields.size(); ++i) {
    gens.push_back(json{{"name", set.names[i]}, {"field", to_string(set.fields[i], po)}});
  }
  report.inputs["generators"] = gens;
  commutator_table(report, set, po);
  return emit(report, common, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lie point and non-Cartan symmetries of ODEs", "liesym"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--format", common.format, "report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", common.seed, "seed of the numeric zero test");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "check invariance of generators");
  verify_cmd->add_option("--system", verify.system, "system: file, catalog key or equations")->required();
  verify_cmd->add_option("--generator", verify.generators, "vector field xi*dx + phi*dy (repeatable)");
  verify_cmd->add_option("--catalog", verify.catalog, "generator catalog key");
  verify_cmd->add_option("--m", verify.m, "number of dependent variables");
  verify_cmd->add_option("--n", verify.n, "order of the catalog system");

  DeterminingArgs determining;
  auto* det_cmd = app.add_subcommand("determining", "determining equations of an ansatz");
  det_cmd->add_option("--system", determining.system, "system: file, catalog key or equations")->required();
  det_cmd->add_option("--ansatz", determining.ansatz, "full, restricted, xi=...,phi=... or a vector field");
  det_cmd->add_option("--m", determining.m, "number of dependent variables");

  ClassifyArgs classify;
  auto* cls_cmd = app.add_subcommand("classify", "canonical-class membership and linearizability");
  cls_cmd->add_option("--system", classify.system, "system: file, catalog key or equations")->required();
  cls_cmd->add_option("--m", classify.m, "number of dependent variables");

  CatalogArgs catalog;
  auto* cat_cmd = app.add_subcommand("catalog", "print catalog entries");
  cat_cmd->add_option("key", catalog.key, "catalog key")->required();
  cat_cmd->add_option("--set", catalog.set, "generator set for commutators");
  cat_cmd->add_option("--m", catalog.m, "number of dependent variables");
  cat_cmd->add_option("--n", catalog.n, "order");

  CommutatorArgs comm;
  auto* comm_cmd = app.add_subcommand("commutators", "commutator table of a generator set");
  comm_cmd->add_option("--set", comm.set, "generator catalog key");
  comm_cmd->add_option("--generator", comm.generators, "vector field (repeatable)");
  comm_cmd->add_option("--m", comm.m, "number of dependent variables");
  comm_cmd->add_option("--n", comm.n, "order");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*verify_cmd) return cmd_verify(verify, common, out);
    if (*det_cmd) return cmd_determining(determining, common, out);
    if (*cls_cmd) return cmd_classify(classify, common, out);
    if (*cat_cmd) return cmd_catalog(catalog, common, out);
    if (*comm_cmd) return cmd_commutators(comm, common, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ContextMismatchError& e) {
    err << "context error: " << e.what() << '\n';
    return kUsageError;
  } catch (const InapplicableError& e) {
    err << "unsupported input: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace liesym::cli
