#pragma once

#include "tmlcost/btypes/btype.hpp"
#include "tmlcost/costgen/cost_expr.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace tmlcost::costgen {

using btypes::Atom;
using btypes::BasicValue;
using btypes::BTypePtr;

/// Pending invocation: when it was issued and what was called.
struct PendingCall {
  std::string future;
  CostExpr time;
  std::string method;
  std::vector<BasicValue> header;  // callee cog value first

  const std::string& cog() const { return header.front().cog; }
};

/// Translation environment, in insertion order.
class TransEnv {
public:
  const std::vector<PendingCall>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  const PendingCall* find(const std::string& f) const;
  void add(PendingCall p) { entries_.push_back(std::move(p)); }
  /// Removes every entry on `cog` and returns them in order.
  std::vector<PendingCall> take_cog(const std::string& cog);

private:
  std::vector<PendingCall> entries_;
};

/// Names for the arguments the analysis cannot track (`‖--‖`).
class FreshNames {
public:
  explicit FreshNames(std::string prefix = "_u") : prefix_(std::move(prefix)) {}
  std::string next() { return prefix_ + std::to_string(++count_); }

private:
  std::string prefix_;
  int count_ = 0;
};

/// ‖t‖: c[e] and e give e; -- gives a fresh unconstrained name.
LinExpr strip(const BasicValue& v, FreshNames& fresh);

struct Branch {
  TransEnv psi;
  std::vector<SizeExpr> guard;  // conjunction
  CostExpr cost;
};

std::pair<TransEnv, CostExpr> translate_atom(TransEnv psi, const std::string& cog, CostExpr e, const Atom& a,
                                             FreshNames& fresh);

std::vector<Branch> translate_btype(const Branch& start, const std::string& cog, const BTypePtr& b, FreshNames& fresh);

/// Cost of synchronizing, from 0, every invocation left in `psi`.
CostExpr drain_residual(const TransEnv& psi, const std::string& cog, FreshNames& fresh);

struct CostEquation {
  std::string symbol;
  std::vector<std::string> formals;
  CostExpr body;
  std::vector<SizeExpr> guard;  // conjunction; empty is true

  /// `fib(e, n) = 1/e + max(fib(e, n - 1), fib(e, n - 2)) [n ≥ 2]`
  std::string str() const;
};

struct CostEquationSystem {
  std::vector<CostEquation> equations;
  /// Formal names per symbol and which of them are cog capacities.
  std::map<std::string, std::vector<std::string>> formals;
  std::map<std::string, std::vector<bool>> capacity_positions;
  std::string entry = "main";

  std::vector<const CostEquation*> equations_for(const std::string& symbol) const;
  std::string str() const;
};

class UndefinedSymbol : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::vector<CostEquation> translate_method(const btypes::MethodBType& mb);

/// All method equations plus the entry `main`, whose formals are the
/// main block's Int locals that stay symbolic.
CostEquationSystem translate_program(const btypes::BProgram& bp);

}  // namespace tmlcost::costgen
