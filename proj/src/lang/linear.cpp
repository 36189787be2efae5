#include "tmlcost/lang/linear.hpp"

#include <sstream>

namespace tmlcost::lang {

LinExpr LinExpr::var(const std::string& name, Rational coeff) {
  LinExpr e;
  if (!coeff.is_zero()) e.terms_.emplace(name, std::move(coeff));
  return e;
}

Rational LinExpr::coeff(const std::string& name) const {
  auto it = terms_.find(name);
  return it == terms_.end() ? Rational(0) : it->second;
}

bool LinExpr::is_single_var() const {
  return terms_.size() == 1 && constant_.is_zero() && terms_.begin()->second == Rational(1);
}

bool LinExpr::is_integral() const {
  if (!constant_.is_integer()) return false;
  for (const auto& [_, k] : terms_)
    if (!k.is_integer()) return false;
  return true;
}

std::set<std::string> LinExpr::vars() const {
  std::set<std::string> out;
  for (const auto& [v, _] : terms_) out.insert(v);
  return out;
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  constant_ += o.constant_;
  for (const auto& [v, k] : o.terms_) {
    auto [it, inserted] = terms_.emplace(v, k);
    if (!inserted) {
      it->second += k;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) { return *this += -o; }

LinExpr& LinExpr::operator*=(const Rational& k) {
  if (k.is_zero()) {
    terms_.clear();
    constant_ = 0;
    return *this;
  }
  constant_ *= k;
  for (auto& [_, c] : terms_) c *= k;
  return *this;
}

LinExpr LinExpr::substitute(const std::function<std::optional<LinExpr>(const std::string&)>& sub) const {
  LinExpr out(constant_);
  for (const auto& [v, k] : terms_) {
    if (auto r = sub(v))
      out += *r * k;
    else
      out += LinExpr::var(v, k);
  }
  return out;
}

bool operator<(const LinExpr& a, const LinExpr& b) {
  if (a.constant_ != b.constant_) return a.constant_ < b.constant_;
  return a.terms_ < b.terms_;
}

std::string LinExpr::str() const {
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const Rational& k, const std::string& name) {
    Rational mag = k.sign() < 0 ? -k : k;
    if (first) {
      if (k.sign() < 0) os << "-";
    } else {
      os << (k.sign() < 0 ? " - " : " + ");
    }
    first = false;
    if (name.empty()) {
      os << mag.str();
    } else if (mag == Rational(1)) {
      os << name;
    } else {
      os << mag.str() << "*" << name;
    }
  };
  for (const auto& [v, k] : terms_) emit(k, v);
  if (!constant_.is_zero() || first) emit(constant_, "");
  return os.str();
}

SizeExpr SizeExpr::cmp(LinExpr lhs, CmpOp op, LinExpr rhs) {
  return SizeExpr(Node(Cmp{std::move(lhs), op, std::move(rhs)}));
}

SizeExpr SizeExpr::conj(SizeExpr a, SizeExpr b) {
  return SizeExpr(Node(And{std::make_shared<const SizeExpr>(std::move(a)),
                           std::make_shared<const SizeExpr>(std::move(b))}));
}

SizeExpr SizeExpr::disj(SizeExpr a, SizeExpr b) {
  return SizeExpr(Node(Or{std::make_shared<const SizeExpr>(std::move(a)),
                          std::make_shared<const SizeExpr>(std::move(b))}));
}

std::set<std::string> SizeExpr::vars() const {
  return std::visit(
      [](const auto& n) -> std::set<std::string> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LinExpr>) {
          return n.vars();
        } else if constexpr (std::is_same_v<T, Cmp>) {
          auto s = n.lhs.vars();
          s.merge(n.rhs.vars());
          return s;
        } else {
          auto s = n.lhs->vars();
          s.merge(n.rhs->vars());
          return s;
        }
      },
      node_);
}

SizeExpr SizeExpr::substitute(const std::function<std::optional<LinExpr>(const std::string&)>& sub) const {
  return std::visit(
      [&](const auto& n) -> SizeExpr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LinExpr>) {
          return SizeExpr(n.substitute(sub));
        } else if constexpr (std::is_same_v<T, Cmp>) {
          return cmp(n.lhs.substitute(sub), n.op, n.rhs.substitute(sub));
        } else if constexpr (std::is_same_v<T, And>) {
          return conj(n.lhs->substitute(sub), n.rhs->substitute(sub));
        } else {
          return disj(n.lhs->substitute(sub), n.rhs->substitute(sub));
        }
      },
      node_);
}

SizeExpr SizeExpr::negate() const {
  return std::visit(
      [](const auto& n) -> SizeExpr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LinExpr>) {
          return cmp(n, CmpOp::Eq, LinExpr());
        } else if constexpr (std::is_same_v<T, Cmp>) {
          switch (n.op) {
            case CmpOp::Le:
              if ((n.lhs - n.rhs).is_integral()) return cmp(n.rhs + LinExpr(Rational(1)), CmpOp::Le, n.lhs);
              return cmp(n.rhs, CmpOp::Lt, n.lhs);
            case CmpOp::Lt:
              return cmp(n.rhs, CmpOp::Le, n.lhs);
            case CmpOp::Eq:
              return cmp(n.lhs, CmpOp::Ne, n.rhs);
            case CmpOp::Ne:
              return cmp(n.lhs, CmpOp::Eq, n.rhs);
          }
          return cmp(n.lhs, CmpOp::Eq, n.rhs);
        } else if constexpr (std::is_same_v<T, And>) {
          return disj(n.lhs->negate(), n.rhs->negate());
        } else {
          return conj(n.lhs->negate(), n.rhs->negate());
        }
      },
      node_);
}

namespace {

std::optional<Rational> eval_lin(const LinExpr& e,
                                 const std::function<std::optional<Rational>(const std::string&)>& lookup) {
  Rational acc = e.constant();
  for (const auto& [v, k] : e.terms()) {
    auto x = lookup(v);
    if (!x) return std::nullopt;
    acc += k * *x;
  }
  return acc;
}

Rational from_bool(bool b) { return b ? Rational(1) : Rational(0); }

}  // namespace

std::optional<Rational> SizeExpr::eval(
    const std::function<std::optional<Rational>(const std::string&)>& lookup) const {
  return std::visit(
      [&](const auto& n) -> std::optional<Rational> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LinExpr>) {
          return eval_lin(n, lookup);
        } else if constexpr (std::is_same_v<T, Cmp>) {
          auto a = eval_lin(n.lhs, lookup);
          auto b = eval_lin(n.rhs, lookup);
          if (!a || !b) return std::nullopt;
          switch (n.op) {
            case CmpOp::Le: return from_bool(*a <= *b);
            case CmpOp::Lt: return from_bool(*a < *b);
            case CmpOp::Eq: return from_bool(*a == *b);
            case CmpOp::Ne: return from_bool(*a != *b);
          }
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, And>) {
          auto a = truth(n.lhs->eval(lookup));
          auto b = truth(n.rhs->eval(lookup));
          if ((a && !*a) || (b && !*b)) return Rational(0);
          if (!a || !b) return std::nullopt;
          return Rational(1);
        } else {
          auto a = truth(n.lhs->eval(lookup));
          auto b = truth(n.rhs->eval(lookup));
          if ((a && *a) || (b && *b)) return Rational(1);
          if (!a || !b) return std::nullopt;
          return Rational(0);
        }
      },
      node_);
}

namespace {

const char* op_text(CmpOp op, bool flipped, Notation notation) {
  bool math = notation == Notation::Math;
  switch (op) {
    case CmpOp::Le: return flipped ? (math ? "≥" : ">=") : (math ? "≤" : "<=");
    case CmpOp::Lt: return flipped ? ">" : "<";
    case CmpOp::Eq: return math ? "=" : "==";
    case CmpOp::Ne: return math ? "≠" : "!=";
  }
  return "?";
}

}  // namespace

std::string SizeExpr::str(Notation notation) const {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LinExpr>) {
          return n.str();
        } else if constexpr (std::is_same_v<T, Cmp>) {
          // Constant on the left reads better flipped: 2 <= n prints as n >= 2.
          if (n.lhs.is_constant() && !n.rhs.is_constant() && (n.op == CmpOp::Le || n.op == CmpOp::Lt))
            return n.rhs.str() + " " + op_text(n.op, true, notation) + " " + n.lhs.str();
          return n.lhs.str() + " " + op_text(n.op, false, notation) + " " + n.rhs.str();
        } else {
          constexpr bool is_and = std::is_same_v<T, And>;
          const char* word = is_and ? " and " : " or ";
          if (notation == Notation::Math) word = is_and ? " ∧ " : " ∨ ";
          return "(" + n.lhs->str(notation) + ")" + word + "(" + n.rhs->str(notation) + ")";
        }
      },
      node_);
}

bool operator==(const SizeExpr& a, const SizeExpr& b) {
  if (a.node_.index() != b.node_.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node_);
        if constexpr (std::is_same_v<T, LinExpr> || std::is_same_v<T, SizeExpr::Cmp>) {
          return x == y;
        } else {
          return *x.lhs == *y.lhs && *x.rhs == *y.rhs;
        }
      },
      a.node_);
}

}  // namespace tmlcost::lang
