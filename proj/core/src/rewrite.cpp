#include "liesym/rewrite.hpp"

#include "liesym/errors.hpp"

namespace liesym {

Symbol formal(int i) { return Symbol::parameter("_" + std::to_string(i)); }

RewriteRule::RewriteRule(Symbol head, std::vector<Symbol> formals, Expression replacement, bool zero_test_only)
    : head_(std::move(head)),
      formals_(std::move(formals)),
      replacement_(std::move(replacement)),
      zero_test_only_(zero_test_only) {
  if (!head_.is_function()) throw Error("rule head must be a function symbol");
  if (formals_.size() != head_.arity()) throw Error("rule for '" + head_.name() + "' has the wrong number of formals");
  for (const auto& f : functions_of(replacement_)) {
    if (matches(f)) throw Error("rule replacement contains its own head '" + head_.name() + "'");
  }
}

bool RewriteRule::matches(const Symbol& function) const {
  if (!function.is_function() || function.name() != head_.name() || function.arity() != head_.arity()) return false;
  for (std::size_t i = 0; i < head_.arity(); ++i) {
    if (function.derivatives()[i] < head_.derivatives()[i]) return false;
  }
  return true;
}

Expression RewriteRule::rewrite(const Atom& application) const {
  Expression value = replacement_;
  const auto& d = application.head().derivatives();
  for (std::size_t i = 0; i < formals_.size(); ++i) {
    for (int k = head_.derivatives()[i]; k < d[i]; ++k) value = differentiate(value, formals_[i]);
  }
  Bindings bind;
  for (std::size_t i = 0; i < formals_.size(); ++i) bind.emplace(formals_[i], application.arguments()[i]);
  return substitute_simultaneous(value, bind);
}

std::string RewriteRule::to_string() const {
  std::vector<Expression> args(formals_.begin(), formals_.end());
  return liesym::to_string(Expression::apply(head_, args)) + " -> " + liesym::to_string(replacement_);
}

Expression apply_rules(const Expression& e, const std::vector<RewriteRule>& rules, bool include_zero_test_only) {
  std::vector<const RewriteRule*> active;
  for (const auto& r : rules) {
    if (include_zero_test_only || !r.zero_test_only()) active.push_back(&r);
  }
  if (active.empty()) return e;
  auto step = [&](const Atom& a) -> std::optional<Expression> {
    if (!a.is_application()) return std::nullopt;
    const RewriteRule* best = nullptr;
    for (const auto* r : active) {
      if (r->matches(a.head()) &&
          (!best || r->head().total_derivative_order() > best->head().total_derivative_order())) {
        best = r;
      }
    }
    if (!best) return std::nullopt;
    return best->rewrite(a);
  };
  Expression current = e;
  constexpr int kMaxRounds = 64;
  for (int round = 0; round < kMaxRounds; ++round) {
    Expression next = map_atoms(current, step);
    if (next == current) return current;
    current = std::move(next);
  }
  throw Error("rewriting did not reach a fixed point");
}

}  // namespace liesym
