#pragma once

#include "tmlcost/rational.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>

namespace tmlcost::lang {

/// Name under which `this.capacity` appears inside linear expressions.
inline constexpr const char* kThisCapacityVar = "this.capacity";

/// Linear expression `c + a1*x1 + ... + an*xn` with exact rational coefficients.
/// Zero coefficients are never stored, so structural equality is semantic equality.
class LinExpr {
public:
  LinExpr() = default;
  LinExpr(Rational constant) : constant_(std::move(constant)) {}  // NOLINT
  static LinExpr var(const std::string& name, Rational coeff = Rational(1));

  const Rational& constant() const { return constant_; }
  const std::map<std::string, Rational>& terms() const { return terms_; }
  Rational coeff(const std::string& name) const;

  bool is_constant() const { return terms_.empty(); }
  /// True iff this is exactly one variable with coefficient 1 and no constant.
  bool is_single_var() const;
  const std::string& single_var() const { return terms_.begin()->first; }
  /// True iff every coefficient and the constant are integers.
  bool is_integral() const;
  std::set<std::string> vars() const;

  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator-=(const LinExpr& o);
  LinExpr& operator*=(const Rational& k);
  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(LinExpr a, const Rational& k) { return a *= k; }
  LinExpr operator-() const { return *this * Rational(-1); }

  /// Replaces variables that `sub` maps; others are kept.
  LinExpr substitute(const std::function<std::optional<LinExpr>(const std::string&)>& sub) const;

  friend bool operator==(const LinExpr&, const LinExpr&) = default;
  friend bool operator<(const LinExpr& a, const LinExpr& b);

  /// "n - 1", "2*x + 3", "0".
  std::string str() const;

private:
  Rational constant_{0};
  std::map<std::string, Rational> terms_;
};

enum class CmpOp { Le, Lt, Eq, Ne };

enum class Notation { Source, Math };

/// Boolean/arithmetic size expression:
///   se ::= ve | ve op ve | se and se | se or se
/// A bare `ve` used as a condition is true iff it is nonzero.
class SizeExpr {
public:
  struct Cmp {
    LinExpr lhs;
    CmpOp op;
    LinExpr rhs;
    friend bool operator==(const Cmp&, const Cmp&) = default;
  };
  struct And {
    std::shared_ptr<const SizeExpr> lhs, rhs;
  };
  struct Or {
    std::shared_ptr<const SizeExpr> lhs, rhs;
  };
  using Node = std::variant<LinExpr, Cmp, And, Or>;

  SizeExpr() : node_(LinExpr()) {}
  SizeExpr(LinExpr v) : node_(std::move(v)) {}  // NOLINT
  static SizeExpr cmp(LinExpr lhs, CmpOp op, LinExpr rhs);
  static SizeExpr conj(SizeExpr a, SizeExpr b);
  static SizeExpr disj(SizeExpr a, SizeExpr b);

  const Node& node() const { return node_; }
  bool is_linear() const { return std::holds_alternative<LinExpr>(node_); }
  const LinExpr& linear() const { return std::get<LinExpr>(node_); }

  std::set<std::string> vars() const;
  SizeExpr substitute(const std::function<std::optional<LinExpr>(const std::string&)>& sub) const;

  /// Logical complement, with negation pushed to the comparisons:
  /// not(a <= b) becomes b + 1 <= a when a - b has integer coefficients
  /// and b < a otherwise.
  SizeExpr negate() const;

  /// Value of the expression; comparisons and connectives yield 1 or 0.
  /// `lookup` returns nullopt for unknown variables, which makes the
  /// result unknown unless a connective short-circuits it.
  std::optional<Rational> eval(const std::function<std::optional<Rational>(const std::string&)>& lookup) const;

  std::string str(Notation notation = Notation::Source) const;

  friend bool operator==(const SizeExpr& a, const SizeExpr& b);

private:
  explicit SizeExpr(Node n) : node_(std::move(n)) {}
  Node node_;
};

/// Truth value of a condition: nonzero is true, unknown stays unknown.
inline std::optional<bool> truth(const std::optional<Rational>& v) {
  if (!v) return std::nullopt;
  return !v->is_zero();
}

}  // namespace tmlcost::lang
