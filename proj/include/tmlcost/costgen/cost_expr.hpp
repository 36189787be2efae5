#pragma once

#include "tmlcost/lang/linear.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace tmlcost::costgen {

using lang::LinExpr;
using lang::SizeExpr;

/// Cost expression: linear terms, `se/se'`, sums, max, and applications
/// of cost symbols. Pure syntax; nothing is evaluated on construction.
struct CostExpr {
  enum class Kind { Lin, Ratio, Add, Max, Apply };
  Kind kind = Kind::Lin;
  LinExpr num;                   // Lin: the value; Ratio: numerator
  LinExpr den;                   // Ratio
  std::vector<CostExpr> ops;     // Add, Max
  std::string callee;            // Apply
  std::vector<LinExpr> args;     // Apply

  static CostExpr zero() { return {}; }
  static CostExpr lin(LinExpr e);
  /// `num/den`; a constant denominator folds into a linear term.
  static CostExpr ratio(LinExpr num, LinExpr den);
  static CostExpr apply(std::string callee, std::vector<LinExpr> args);
  static CostExpr add(std::vector<CostExpr> ops);
  static CostExpr max(std::vector<CostExpr> ops);

  bool is_zero() const { return kind == Kind::Lin && num == LinExpr(); }
  std::set<std::string> vars() const;
  /// Callees of every application, in order of appearance.
  void applications(std::vector<const CostExpr*>& out) const;

  std::string str() const;
  friend bool operator==(const CostExpr& a, const CostExpr& b);
};

CostExpr operator+(const CostExpr& a, const CostExpr& b);

/// Normal form used for display and comparison: nested sums and maxima
/// are flattened, zero summands dropped, linear parts and ratios with a
/// common denominator merged, duplicate max operands removed, and
/// summands shared by every max operand pulled out:
/// max(1/e + a, b + 1/e) becomes 1/e + max(a, b).
CostExpr simplify(const CostExpr& e);

}  // namespace tmlcost::costgen
