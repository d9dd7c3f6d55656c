#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace liesym {

// Declaration order fixes the canonical atom order:
// independent < jet (by index, then order) < parameter < function.
enum class SymbolKind : std::uint8_t { independent, jet, parameter, function };

/// A named coordinate of jet space, a constant parameter, or the head of an
/// opaque function application.
///
/// Jet symbols carry a dependent-variable index (1-based) and a derivative
/// order; order 0 is the dependent variable itself. Function symbols carry a
/// derivative multi-index with one entry per argument, so `derivatives().size()`
/// is the arity.
class Symbol {
 public:
  static Symbol independent(std::string name = "x");
  static Symbol jet(int index, int order = 0);
  static Symbol dependent(int index) { return jet(index, 0); }
  static Symbol parameter(std::string name);
  static Symbol function(std::string name, std::vector<int> derivatives);
  static Symbol function(std::string name, std::size_t arity);

  SymbolKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  int index() const noexcept { return index_; }
  int order() const noexcept { return order_; }
  std::size_t arity() const noexcept { return derivatives_.size(); }
  const std::vector<int>& derivatives() const noexcept { return derivatives_; }
  int total_derivative_order() const noexcept;

  bool is_independent() const noexcept { return kind_ == SymbolKind::independent; }
  bool is_jet() const noexcept { return kind_ == SymbolKind::jet; }
  bool is_dependent() const noexcept { return kind_ == SymbolKind::jet && order_ == 0; }
  bool is_parameter() const noexcept { return kind_ == SymbolKind::parameter; }
  bool is_function() const noexcept { return kind_ == SymbolKind::function; }

  // Function symbols only.
  Symbol differentiated(std::size_t argument, int times = 1) const;
  Symbol underived() const;

  // Jet symbols only.
  Symbol raised(int by = 1) const { return jet(index_, order_ + by); }

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend std::strong_ordering operator<=>(const Symbol&, const Symbol&) = default;

 private:
  Symbol() = default;

  SymbolKind kind_ = SymbolKind::parameter;
  std::string name_;
  int index_ = 0;
  int order_ = 0;
  std::vector<int> derivatives_;
};

}  // namespace liesym
