#include "liesym/jet.hpp"

#include "liesym/errors.hpp"

namespace liesym {

JetContext::JetContext(int m_, int order_) : m(m_), order(order_) {
  if (m < 1) throw Error("jet context needs m >= 1");
  if (order < 1) throw Error("jet context needs order >= 1");
}

void JetContext::check(const Expression& e) const {
  for (const auto& s : symbols_of(e)) {
    if (!s.is_jet()) continue;
    if (s.index() > m) {
      throw ContextMismatchError("dependent variable " + std::to_string(s.index()) + " outside m = " +
                                 std::to_string(m));
    }
    if (s.order() > order + 1) {
      throw ContextMismatchError("jet order " + std::to_string(s.order()) + " exceeds " + std::to_string(order + 1));
    }
  }
}

std::vector<Symbol> JetContext::jets(int k) const {
  std::vector<Symbol> out;
  for (int j = 1; j <= m; ++j) out.push_back(Symbol::jet(j, k));
  return out;
}

Expression total_derivative(const Expression& e, const JetContext& ctx) {
  ctx.check(e);
  Expression out = differentiate(e, Symbol::independent());
  for (const auto& s : symbols_of(e)) {
    if (!s.is_jet()) continue;
    if (s.order() + 1 > ctx.order + 1) {
      throw ContextMismatchError("total derivative overflows jet order " + std::to_string(ctx.order + 1));
    }
    Expression d = differentiate(e, s);
    if (!d.is_zero()) out += Expression(s.raised()) * d;
  }
  return out;
}

namespace {

void check_point_component(const Expression& e, const JetContext& ctx) {
  ctx.check(e);
  for (const auto& s : symbols_of(e)) {
    if (s.is_jet() && s.order() > 0) throw Error("vector field components may not depend on derivatives");
  }
}

}  // namespace

VectorField::VectorField(JetContext ctx, Expression xi, std::vector<Expression> phi)
    : ctx_(ctx), xi_(std::move(xi)), phi_(std::move(phi)) {
  if (phi_.size() != static_cast<std::size_t>(ctx_.m)) {
    throw ContextMismatchError("vector field needs " + std::to_string(ctx_.m) + " phi components");
  }
  check_point_component(xi_, ctx_);
  for (const auto& p : phi_) check_point_component(p, ctx_);
}

VectorField VectorField::zero(const JetContext& ctx) {
  return VectorField(ctx, Expression(), std::vector<Expression>(static_cast<std::size_t>(ctx.m)));
}

bool VectorField::is_zero() const {
  if (!xi_.is_zero()) return false;
  for (const auto& p : phi_) {
    if (!p.is_zero()) return false;
  }
  return true;
}

Expression VectorField::apply(const Expression& f) const {
  Expression out;
  if (!xi_.is_zero()) out += xi_ * differentiate(f, Symbol::independent());
  for (std::size_t j = 0; j < phi_.size(); ++j) {
    if (!phi_[j].is_zero()) out += phi_[j] * differentiate(f, Symbol::dependent(static_cast<int>(j) + 1));
  }
  return out;
}

VectorField VectorField::map(const std::function<Expression(const Expression&)>& fn) const {
  std::vector<Expression> phi;
  for (const auto& p : phi_) phi.push_back(fn(p));
  return VectorField(ctx_, fn(xi_), std::move(phi));
}

VectorField VectorField::operator-() const {
  return map([](const Expression& e) { return -e; });
}

namespace {

void require_same(const VectorField& a, const VectorField& b) {
  if (a.context().m != b.context().m) throw ContextMismatchError("vector fields over different jet spaces");
}

}  // namespace

VectorField operator+(const VectorField& a, const VectorField& b) {
  require_same(a, b);
  std::vector<Expression> phi;
  for (std::size_t j = 0; j < a.phi_.size(); ++j) phi.push_back(a.phi_[j] + b.phi_[j]);
  return VectorField(a.ctx_, a.xi_ + b.xi_, std::move(phi));
}

VectorField operator-(const VectorField& a, const VectorField& b) { return a + (-b); }

VectorField operator*(const Expression& c, const VectorField& v) {
  return v.map([&](const Expression& e) { return c * e; });
}

bool operator==(const VectorField& a, const VectorField& b) {
  return a.ctx_.m == b.ctx_.m && a.xi_ == b.xi_ && a.phi_ == b.phi_;
}

std::string to_string(const VectorField& v, const PrintOptions& options) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Expression& c = v.component(i);
    if (c.is_zero()) continue;
    std::string basis = i == 0 ? "dx" : "d" + options.dependent_name(static_cast<int>(i));
    std::string part;
    if (c == Expression(1)) {
      part = basis;
    } else if (c == Expression(-1)) {
      part = "-" + basis;
    } else if (c.is_polynomial() && c.numerator().is_monomial()) {
      part = to_string(c, options) + "*" + basis;
    } else {
      part = "(" + to_string(c, options) + ")*" + basis;
    }
    if (out.empty()) {
      out = part;
    } else if (part[0] == '-') {
      out += " - " + part.substr(1);
    } else {
      out += " + " + part;
    }
  }
  return out.empty() ? "0" : out;
}

std::string to_string(const VectorField& v) { return to_string(v, PrintOptions::for_dimension(v.context().m)); }

Expression ProlongedField::apply(const Expression& f) const {
  Expression out = base.apply(f);
  for (const auto& [key, c] : coefficients) {
    if (key.second == 0 || c.is_zero()) continue;
    Expression d = differentiate(f, Symbol::jet(key.first, key.second));
    if (!d.is_zero()) out += c * d;
  }
  return out;
}

ProlongedField prolong(const VectorField& v, int p, int max_order) {
  if (p < 1) throw Error("prolongation order must be >= 1");
  if (p > max_order) throw Error("prolongation order " + std::to_string(p) + " exceeds the maximum " +
                                 std::to_string(max_order));
  JetContext ctx(v.context().m, std::max(p, v.context().order));
  ProlongedField out{v, p, {}};
  Expression dxi = total_derivative(v.xi(), ctx);
  for (int j = 1; j <= ctx.m; ++j) {
    Expression current = v.phi()[static_cast<std::size_t>(j) - 1];
    out.coefficients[{j, 0}] = current;
    for (int k = 0; k < p; ++k) {
      current = total_derivative(current, ctx) - Expression(Symbol::jet(j, k + 1)) * dxi;
      out.coefficients[{j, k + 1}] = current;
    }
  }
  return out;
}

}  // namespace liesym
