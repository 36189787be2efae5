#include "tmlcost/lang/eval.hpp"

namespace tmlcost::lang {

std::string value_str(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ObjectId>) {
          return "o" + std::to_string(x.v);
        } else if constexpr (std::is_same_v<T, FutureId>) {
          return "f" + std::to_string(x.v);
        } else if constexpr (std::is_same_v<T, Rational>) {
          return x.str();
        } else {
          return "⊥";
        }
      },
      v);
}

namespace {

const Value& lookup(const Store& store, const std::string& name) {
  auto it = store.find(name);
  if (it == store.end()) throw EvalError(EvalError::Kind::UnboundVariable, "unbound variable '" + name + "'");
  if (std::holds_alternative<Bottom>(it->second))
    throw EvalError(EvalError::Kind::UnboundVariable, "variable '" + name + "' is uninitialized");
  return it->second;
}

Rational number_of(const Value& v, const std::string& what) {
  if (auto r = std::get_if<Rational>(&v)) return *r;
  throw EvalError(EvalError::Kind::TypeMismatch, what + " is " + value_str(v) + ", expected a number");
}

Rational lookup_number(const Store& store, const EvalContext& ctx, const std::string& name) {
  if (name == kThisCapacityVar) return ctx.capacity;
  return number_of(lookup(store, name), "variable '" + name + "'");
}

Rational bool_value(bool b) { return b ? Rational(1) : Rational(0); }

Rational eval_raw(const RawExpr& e, const Store& store, const EvalContext& ctx) {
  using Op = RawExpr::Op;
  switch (e.op) {
    case Op::Num: return e.num;
    case Op::Var: return lookup_number(store, ctx, e.name);
    case Op::ThisCapacity: return ctx.capacity;
    case Op::This: throw EvalError(EvalError::Kind::TypeMismatch, "'this' used in arithmetic");
    case Op::And: {
      if (eval_raw(*e.lhs, store, ctx).is_zero()) return Rational(0);
      return bool_value(!eval_raw(*e.rhs, store, ctx).is_zero());
    }
    case Op::Or: {
      if (!eval_raw(*e.lhs, store, ctx).is_zero()) return Rational(1);
      return bool_value(!eval_raw(*e.rhs, store, ctx).is_zero());
    }
    default: break;
  }
  Rational a = eval_raw(*e.lhs, store, ctx);
  Rational b = eval_raw(*e.rhs, store, ctx);
  switch (e.op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div:
      if (b.is_zero()) throw EvalError(EvalError::Kind::DivisionByZero, "division by zero");
      return a / b;
    case Op::Le: return bool_value(a <= b);
    default: break;
  }
  throw EvalError(EvalError::Kind::TypeMismatch, "malformed expression");
}

}  // namespace

Value eval_pure(const Expr& e, const Store& store, const EvalContext& ctx) {
  switch (e.cls()) {
    case ExprClass::This: return ctx.self;
    case ExprClass::ThisCapacity: return ctx.capacity;
    case ExprClass::NonSize: return eval_raw(e.raw(), store, ctx);
    case ExprClass::Size: break;
  }
  // A bare variable may hold an object or a future.
  if (e.is_variable() && e.variable() != kThisCapacityVar) return lookup(store, e.variable());
  std::optional<Rational> v =
      e.size_expr().eval([&](const std::string& name) -> std::optional<Rational> {
        return lookup_number(store, ctx, name);
      });
  return *v;
}

Rational eval_number(const Expr& e, const Store& store, const EvalContext& ctx) {
  return number_of(eval_pure(e, store, ctx), "'" + std::string(e.cls() == ExprClass::This ? "this" : "expression") + "'");
}

}  // namespace tmlcost::lang
