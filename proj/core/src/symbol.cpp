#include "liesym/symbol.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "liesym/errors.hpp"

namespace liesym {

Symbol Symbol::independent(std::string name) {
  Symbol s;
  s.kind_ = SymbolKind::independent;
  s.name_ = std::move(name);
  return s;
}

Symbol Symbol::jet(int index, int order) {
  if (index < 1) throw Error("dependent-variable index must be >= 1");
  if (order < 0) throw Error("jet order must be >= 0");
  Symbol s;
  s.kind_ = SymbolKind::jet;
  s.index_ = index;
  s.order_ = order;
  return s;
}

Symbol Symbol::parameter(std::string name) {
  Symbol s;
  s.kind_ = SymbolKind::parameter;
  s.name_ = std::move(name);
  return s;
}

Symbol Symbol::function(std::string name, std::vector<int> derivatives) {
  if (derivatives.empty()) throw Error("function '" + name + "' must have arity >= 1");
  for (int d : derivatives) {
    if (d < 0) throw Error("negative derivative order for function '" + name + "'");
  }
  Symbol s;
  s.kind_ = SymbolKind::function;
  s.name_ = std::move(name);
  s.derivatives_ = std::move(derivatives);
  return s;
}

Symbol Symbol::function(std::string name, std::size_t arity) {
  return function(std::move(name), std::vector<int>(arity, 0));
}

int Symbol::total_derivative_order() const noexcept {
  return std::accumulate(derivatives_.begin(), derivatives_.end(), 0);
}

Symbol Symbol::differentiated(std::size_t argument, int times) const {
  if (!is_function()) throw Error("only function symbols carry derivatives");
  if (argument >= derivatives_.size()) throw Error("argument index out of range for '" + name_ + "'");
  Symbol s = *this;
  s.derivatives_[argument] += times;
  return s;
}

Symbol Symbol::underived() const {
  if (!is_function()) return *this;
  Symbol s = *this;
  std::fill(s.derivatives_.begin(), s.derivatives_.end(), 0);
  return s;
}

}  // namespace liesym
