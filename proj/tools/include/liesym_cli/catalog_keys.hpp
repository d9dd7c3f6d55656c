#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "liesym/catalog.hpp"

namespace liesym::cli {

// "name:k=v,k=v" split into the name and its parameters.
struct CatalogKey {
  std::string name;
  std::map<std::string, std::string> params;

  static CatalogKey parse(const std::string& text);
  int integer(const std::string& key, int fallback) const;
  std::string text() const;
};

struct FieldSet {
  std::string key;
  std::vector<std::string> names;
  std::vector<VectorField> fields;
  std::vector<RewriteRule> rules;
  std::vector<NumericModel> models;
};

// free-fall, non-cartan, canonical. Throws Error for unknown keys.
FieldSet resolve_fields(const CatalogKey& key);

// free-fall, eq13, eq14, eq16, isotropic, iterative; nullopt for other names.
std::optional<OdeSystem> resolve_system(const CatalogKey& key);

SourceEquation source_for(const CatalogKey& key);

}  // namespace liesym::cli
