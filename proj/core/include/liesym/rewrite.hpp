#pragma once

#include <string>
#include <vector>

#include "liesym/expression.hpp"

namespace liesym {

/// head(_1, ..., _a) -> replacement, where the replacement is written in the
/// formal parameters. A rule for f^(k) also rewrites every higher derivative
/// f^(k+j) by differentiating the replacement j times.
class RewriteRule {
 public:
  // Throws when the replacement contains the head or one of its derivatives.
  RewriteRule(Symbol head, std::vector<Symbol> formals, Expression replacement, bool zero_test_only = false);

  const Symbol& head() const noexcept { return head_; }
  const std::vector<Symbol>& formals() const noexcept { return formals_; }
  const Expression& replacement() const noexcept { return replacement_; }
  bool zero_test_only() const noexcept { return zero_test_only_; }

  // Whether the rule rewrites an application with this head.
  bool matches(const Symbol& function) const;
  Expression rewrite(const Atom& application) const;

  std::string to_string() const;

 private:
  Symbol head_;
  std::vector<Symbol> formals_;
  Expression replacement_;
  bool zero_test_only_;
};

// Formal parameter `_i` (1-based).
Symbol formal(int i);

/// Applies `rules` to a fixed point. Rules flagged zero_test_only are skipped
/// unless `include_zero_test_only` is set.
Expression apply_rules(const Expression& e, const std::vector<RewriteRule>& rules,
                       bool include_zero_test_only = false);

}  // namespace liesym
