#pragma once

#include "tmlcost/costgen/translate.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tmlcost::costsolve {

using costgen::CostEquationSystem;

struct CostValue {
  enum class Kind { Finite, Unbounded, BudgetExhausted };
  Kind kind = Kind::Finite;
  Rational value;

  static CostValue finite(Rational v) { return {Kind::Finite, std::move(v)}; }
  static CostValue unbounded() { return {Kind::Unbounded, {}}; }
  static CostValue exhausted() { return {Kind::BudgetExhausted, {}}; }
  bool is_finite() const { return kind == Kind::Finite; }
  std::string str() const;
};

class NoApplicableEquation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct EvalBudget {
  std::size_t max_depth = 10000;
};

/// Unfolds the equations of `symbol` at `args` (nullopt is an unknown
/// argument). The value is the max over every equation whose guard holds,
/// or may hold when it mentions unknowns; linear cost terms count as
/// nat(x) = max(x, 0). Recursion that revisits the same arguments is
/// Unbounded.
CostValue eval_cost(const CostEquationSystem& sys, const std::string& symbol,
                    const std::vector<std::optional<Rational>>& args, const EvalBudget& budget = {});

CostValue eval_cost(const CostEquationSystem& sys, const std::string& symbol, const std::vector<Rational>& args,
                    const EvalBudget& budget = {});

/// Evaluates the entry symbol with its formals bound by name.
CostValue eval_entry(const CostEquationSystem& sys, const std::map<std::string, Rational>& inputs,
                     const EvalBudget& budget = {});

class UnboundDenominator : public std::runtime_error {
public:
  UnboundDenominator(std::string var, const std::string& msg) : std::runtime_error(msg), variable(std::move(var)) {}
  std::string variable;
};

/// CoFloCo input, one `eq(head, cost, [calls], [constraints]).` per line.
/// A capacity formal bound to p/q is replaced by its reciprocal, named by
/// upper-casing, with the constraint `p*E=q`; a cost 1/e becomes nat(E).
/// Each max operand gets its own clause. `symbols` restricts the output;
/// empty means every method (the entry is left out).
std::string emit_cofloco(const CostEquationSystem& sys, const std::map<std::string, Rational>& capacities,
                         const std::vector<std::string>& symbols = {});

}  // namespace tmlcost::costsolve
