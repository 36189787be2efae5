#include "tmlcost/lang/syntax.hpp"

#include <sstream>

namespace tmlcost::lang {

const char* type_name(SimpleType t) { return t == SimpleType::Int ? "Int" : "Class"; }

std::string type_name(const FullType& t) {
  if (t.future) return std::string("Fut<") + type_name(t.base) + ">";
  return type_name(t.base);
}

std::string print_raw(const RawExpr& e) {
  using Op = RawExpr::Op;
  switch (e.op) {
    case Op::Num: return e.num.is_integer() && e.num.sign() >= 0 ? e.num.str() : "(" + e.num.str() + ")";
    case Op::Var: return e.name;
    case Op::This: return "this";
    case Op::ThisCapacity: return "this.capacity";
    default: break;
  }
  const char* op = "?";
  switch (e.op) {
    case Op::Add: op = " + "; break;
    case Op::Sub: op = " - "; break;
    case Op::Mul: op = " * "; break;
    case Op::Div: op = " / "; break;
    case Op::Le: op = " <= "; break;
    case Op::And: op = " and "; break;
    case Op::Or: op = " or "; break;
    default: break;
  }
  return "(" + print_raw(*e.lhs) + op + print_raw(*e.rhs) + ")";
}

std::string print_expr(const Expr& e) {
  switch (e.cls()) {
    case ExprClass::This: return "this";
    case ExprClass::ThisCapacity: return "this.capacity";
    case ExprClass::Size: return e.size_expr().str(Notation::Source);
    case ExprClass::NonSize: return print_raw(e.raw());
  }
  return "?";
}

namespace {

std::string args(const std::vector<Expr>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += print_expr(xs[i]);
  }
  return out;
}

// Callees and get targets are printed parenthesized unless they are atoms,
// so that `e!m()` never re-associates.
std::string target(const Expr& e) {
  if (e.cls() == ExprClass::This || e.is_variable()) return print_expr(e);
  return "(" + print_expr(e) + ")";
}

std::string print_rhs(const Rhs& r) {
  return std::visit(
      [](const auto& z) -> std::string {
        using T = std::decay_t<decltype(z)>;
        if constexpr (std::is_same_v<T, PureRhs>) {
          return print_expr(z.expr);
        } else if constexpr (std::is_same_v<T, AsyncCallRhs>) {
          return target(z.callee) + "!" + z.method + "(" + args(z.args) + ")";
        } else if constexpr (std::is_same_v<T, SyncCallRhs>) {
          return target(z.callee) + "." + z.method + "(" + args(z.args) + ")";
        } else if constexpr (std::is_same_v<T, GetRhs>) {
          return target(z.future) + ".get";
        } else if constexpr (std::is_same_v<T, NewWithRhs>) {
          return "new Class with " + print_expr(z.capacity);
        } else {
          return "new local Class";
        }
      },
      r);
}

void emit_stmt(std::ostringstream& os, const Stmt& s, int indent) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (auto seq = s.as<SeqStmt>()) {
    emit_stmt(os, *seq->first, indent);
    emit_stmt(os, *seq->rest, indent);
  } else if (auto a = s.as<AssignStmt>()) {
    os << pad << a->var << " = " << print_rhs(a->rhs) << ";\n";
  } else if (auto i = s.as<IfStmt>()) {
    os << pad << "if (" << print_expr(i->cond) << ") {\n";
    emit_stmt(os, *i->then_branch, indent + 1);
    os << pad << "} else {\n";
    emit_stmt(os, *i->else_branch, indent + 1);
    os << pad << "}\n";
  } else if (auto j = s.as<JobStmt>()) {
    os << pad << "job(" << print_expr(j->cycles) << ");\n";
  } else if (auto r = s.as<ReturnStmt>()) {
    os << pad << "return " << print_expr(r->value) << ";\n";
  }
}

void emit_locals(std::ostringstream& os, const std::vector<Local>& locals, int indent) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  for (const auto& l : locals) os << pad << type_name(l.type) << " " << l.name << ";\n";
}

}  // namespace

std::string print_stmt(const Stmt& s, int indent) {
  std::ostringstream os;
  emit_stmt(os, s, indent);
  return os.str();
}

std::string print_method(const MethodDecl& m) {
  std::ostringstream os;
  os << type_name(m.return_type) << " " << m.name << "(";
  for (std::size_t i = 0; i < m.params.size(); ++i) {
    if (i) os << ", ";
    os << type_name(m.params[i].type) << " " << m.params[i].name;
  }
  os << ") {\n";
  emit_locals(os, m.locals, 1);
  emit_stmt(os, *m.body, 1);
  os << "}\n";
  return os.str();
}

std::string print_program(const Program& p) {
  std::ostringstream os;
  for (const auto& m : p.methods) os << print_method(m) << "\n";
  os << "{\n";
  emit_locals(os, p.main.locals, 1);
  emit_stmt(os, *p.main.body, 1);
  os << "} with " << p.main.capacity.str() << "\n";
  return os.str();
}

}  // namespace tmlcost::lang
