#include "liesym_cli/catalog_keys.hpp"

#include "liesym/classify.hpp"
#include "liesym/errors.hpp"

namespace liesym::cli {

CatalogKey CatalogKey::parse(const std::string& text) {
  CatalogKey key;
  auto colon = text.find(':');
  key.name = text.substr(0, colon);
  if (colon == std::string::npos) return key;
  std::string rest = text.substr(colon + 1);
  std::size_t start = 0;
  while (start < rest.size()) {
    auto comma = rest.find(',', start);
    if (comma == std::string::npos) comma = rest.size();
    std::string item = rest.substr(start, comma - start);
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("bad catalog parameter '" + item + "'", colon + 1 + start);
    key.params[item.substr(0, eq)] = item.substr(eq + 1);
    start = comma + 1;
  }
  return key;
}

int CatalogKey::integer(const std::string& name, int fallback) const {
  auto it = params.find(name);
  if (it == params.end()) return fallback;
  try {
    std::size_t used = 0;
    int v = std::stoi(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw ParseError("catalog parameter " + name + " must be an integer", 0);
  }
}

std::string CatalogKey::text() const {
  std::string out = name;
  char sep = ':';
  for (const auto& [k, v] : params) {
    out += sep + k + "=" + v;
    sep = ',';
  }
  return out;
}

SourceEquation source_for(const CatalogKey& key) {
  auto it = key.params.find("q");
  if (it == key.params.end() || it->second == "q(x)") return SourceEquation::symbolic();
  Expression q = liesym::parse(it->second, ParseOptions{1});
  if (q.is_zero()) return SourceEquation::trivial();
  return SourceEquation::with_potential(q);
}

namespace {

void check_range(const std::string& what, int value, int lo, int hi) {
  if (value < lo || value > hi) {
    throw Error(what + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

}  // namespace

FieldSet resolve_fields(const CatalogKey& key) {
  FieldSet set;
  set.key = key.text();
  if (key.name == "free-fall") {
    set.names = free_fall_names();
    set.fields = free_fall_symmetries();
    return set;
  }
  if (key.name == "non-cartan") {
    int m = key.integer("m", 1);
    check_range("m", m, 1, 3);
    SourceEquation src = source_for(key);
    set.names = non_cartan_names(m);
    set.fields = non_cartan_generators(m, src);
    set.rules = src.rules;
    set.models = src.models;
    return set;
  }
  if (key.name == "canonical") {
    int m = key.integer("m", 1), n = key.integer("n", 2);
    check_range("m", m, 1, 3);
    check_range("n", n, 2, 4);
    SourceEquation src = source_for(key);
    set.names = canonical_basis_names(m, n);
    set.fields = canonical_basis(m, n, src);
    set.rules = src.rules;
    set.models = src.models;
    return set;
  }
  throw Error("unknown generator catalog key '" + key.name + "'");
}

std::optional<OdeSystem> resolve_system(const CatalogKey& key) {
  if (key.name == "free-fall") return free_fall_system();
  if (key.name == "eq13") return non_cartan_family(key.params.count("H") ? key.params.at("H") : "H");
  if (key.name == "eq14") return nonlinear_counterexample();
  if (key.name == "eq16") {
    auto coefficient = [&](const std::string& name) {
      auto it = key.params.find(name);
      if (it == key.params.end()) return Expression::apply(name, {Expression(Symbol::independent())});
      return liesym::parse(it->second, ParseOptions{2});
    };
    return trace_free_system(coefficient("A"), coefficient("B"), coefficient("C"));
  }
  if (key.name == "isotropic") {
    int m = key.integer("m", 1), n = key.integer("n", 2);
    check_range("m", m, 1, 3);
    check_range("n", n, 2, 4);
    return isotropic_system(source_for(key), m, n);
  }
  return std::nullopt;
}

}  // namespace liesym::cli
