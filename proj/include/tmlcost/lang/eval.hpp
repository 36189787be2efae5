#pragma once

#include "tmlcost/lang/ast.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>

namespace tmlcost::lang {

struct ObjectId {
  std::uint32_t v = 0;
  friend auto operator<=>(const ObjectId&, const ObjectId&) = default;
};
struct FutureId {
  std::uint32_t v = 0;
  friend auto operator<=>(const FutureId&, const FutureId&) = default;
};
struct CogId {
  std::uint32_t v = 0;
  friend auto operator<=>(const CogId&, const CogId&) = default;
};

/// Uninitialized local, or the content of an unresolved future.
struct Bottom {
  friend bool operator==(const Bottom&, const Bottom&) = default;
};

/// Runtime value: object reference, future reference, number or bottom.
using Value = std::variant<ObjectId, FutureId, Rational, Bottom>;

std::string value_str(const Value& v);

using Store = std::map<std::string, Value>;

/// What `this` and `this.capacity` denote while evaluating.
struct EvalContext {
  ObjectId self;
  Rational capacity;
};

class EvalError : public std::runtime_error {
public:
  enum class Kind { UnboundVariable, TypeMismatch, DivisionByZero };
  EvalError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
  Kind kind;
};

/// Value of a pure expression. Arithmetic is exact; comparisons and
/// connectives yield 1 or 0. Never mutates `store`.
Value eval_pure(const Expr& e, const Store& store, const EvalContext& ctx);

/// eval_pure restricted to numbers.
Rational eval_number(const Expr& e, const Store& store, const EvalContext& ctx);

}  // namespace tmlcost::lang
