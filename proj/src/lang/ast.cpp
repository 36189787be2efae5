#include "tmlcost/lang/ast.hpp"

namespace tmlcost::lang {

RawExprPtr RawExpr::number(Rational k) {
  auto e = std::make_shared<RawExpr>();
  e->op = Op::Num;
  e->num = std::move(k);
  return e;
}

RawExprPtr RawExpr::variable(std::string n) {
  auto e = std::make_shared<RawExpr>();
  e->op = Op::Var;
  e->name = std::move(n);
  return e;
}

RawExprPtr RawExpr::leaf(Op op) {
  auto e = std::make_shared<RawExpr>();
  e->op = op;
  return e;
}

RawExprPtr RawExpr::binary(Op op, RawExprPtr a, RawExprPtr b) {
  auto e = std::make_shared<RawExpr>();
  e->op = op;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

bool operator==(const RawExpr& a, const RawExpr& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case RawExpr::Op::Num: return a.num == b.num;
    case RawExpr::Op::Var: return a.name == b.name;
    case RawExpr::Op::This:
    case RawExpr::Op::ThisCapacity: return true;
    default: return *a.lhs == *b.lhs && *a.rhs == *b.rhs;
  }
}

Expr Expr::size(SizeExpr se) {
  Expr e(ExprClass::Size);
  e.size_ = std::move(se);
  return e;
}

Expr Expr::non_size(RawExprPtr raw) {
  Expr e(ExprClass::NonSize);
  e.raw_ = std::move(raw);
  return e;
}

bool Expr::is_variable() const { return cls_ == ExprClass::Size && size_.is_linear() && size_.linear().is_single_var(); }

bool operator==(const Expr& a, const Expr& b) {
  if (a.cls_ != b.cls_) return false;
  switch (a.cls_) {
    case ExprClass::Size: return a.size_ == b.size_;
    case ExprClass::NonSize: return *a.raw_ == *b.raw_;
    default: return true;
  }
}

std::optional<LinExpr> to_linear(const RawExpr& raw) {
  using Op = RawExpr::Op;
  switch (raw.op) {
    case Op::Num: return LinExpr(raw.num);
    case Op::Var: return LinExpr::var(raw.name);
    case Op::ThisCapacity: return LinExpr::var(kThisCapacityVar);
    case Op::Add:
    case Op::Sub: {
      auto a = to_linear(*raw.lhs);
      if (!a) return std::nullopt;
      auto b = to_linear(*raw.rhs);
      if (!b) return std::nullopt;
      return raw.op == Op::Add ? *a + *b : *a - *b;
    }
    case Op::Mul: {
      auto a = to_linear(*raw.lhs);
      if (!a) return std::nullopt;
      auto b = to_linear(*raw.rhs);
      if (!b) return std::nullopt;
      if (a->is_constant()) return *b * a->constant();
      if (b->is_constant()) return *a * b->constant();
      return std::nullopt;
    }
    default: return std::nullopt;
  }
}

namespace {

std::optional<SizeExpr> to_size(const RawExpr& raw) {
  using Op = RawExpr::Op;
  switch (raw.op) {
    case Op::And:
    case Op::Or: {
      auto a = to_size(*raw.lhs);
      if (!a) return std::nullopt;
      auto b = to_size(*raw.rhs);
      if (!b) return std::nullopt;
      return raw.op == Op::And ? SizeExpr::conj(*a, *b) : SizeExpr::disj(*a, *b);
    }
    case Op::Le: {
      auto a = to_linear(*raw.lhs);
      if (!a) return std::nullopt;
      auto b = to_linear(*raw.rhs);
      if (!b) return std::nullopt;
      return SizeExpr::cmp(*a, CmpOp::Le, *b);
    }
    default:
      if (auto v = to_linear(raw)) return SizeExpr(*v);
      return std::nullopt;
  }
}

}  // namespace

Expr classify_expr(const RawExpr& raw) {
  if (raw.op == RawExpr::Op::This) return Expr::this_ref();
  if (raw.op == RawExpr::Op::ThisCapacity) return Expr::this_capacity();
  if (auto se = to_size(raw)) return Expr::size(std::move(*se));
  return Expr::non_size(std::make_shared<const RawExpr>(raw));
}

StmtPtr Stmt::make(Node n, SourceLoc loc) {
  auto s = std::make_shared<Stmt>();
  s->node = std::move(n);
  s->loc = loc;
  return s;
}

StmtPtr Stmt::sequence(const std::vector<StmtPtr>& stmts) {
  if (stmts.empty()) return make(SkipStmt{});
  StmtPtr acc = stmts.back();
  for (auto it = stmts.rbegin() + 1; it != stmts.rend(); ++it) acc = make(SeqStmt{*it, acc}, (*it)->loc);
  return acc;
}

bool same_stmt(const Stmt& a, const Stmt& b) {
  if (a.node.index() != b.node.index()) return false;
  if (auto x = a.as<AssignStmt>()) {
    auto y = b.as<AssignStmt>();
    return x->var == y->var && x->rhs == y->rhs;
  }
  if (auto x = a.as<IfStmt>()) {
    auto y = b.as<IfStmt>();
    return x->cond == y->cond && same_stmt(*x->then_branch, *y->then_branch) &&
           same_stmt(*x->else_branch, *y->else_branch);
  }
  if (auto x = a.as<JobStmt>()) return x->cycles == b.as<JobStmt>()->cycles;
  if (auto x = a.as<ReturnStmt>()) return x->value == b.as<ReturnStmt>()->value;
  if (auto x = a.as<SeqStmt>()) {
    auto y = b.as<SeqStmt>();
    return same_stmt(*x->first, *y->first) && same_stmt(*x->rest, *y->rest);
  }
  return true;
}

const MethodDecl* Program::find_method(const std::string& name) const {
  for (const auto& m : methods)
    if (m.name == name) return &m;
  return nullptr;
}

bool operator==(const MethodDecl& a, const MethodDecl& b) {
  return a.name == b.name && a.return_type == b.return_type && a.params == b.params && a.locals == b.locals &&
         same_stmt(*a.body, *b.body);
}

bool operator==(const Program& a, const Program& b) {
  return a.methods == b.methods && a.main.locals == b.main.locals && a.main.capacity == b.main.capacity &&
         same_stmt(*a.main.body, *b.main.body);
}

namespace {

std::string located(SourceLoc loc, const std::string& msg) {
  return std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + msg;
}

}  // namespace

ParseError::ParseError(SourceLoc l, const std::string& msg) : std::runtime_error(located(l, msg)), loc(l) {}

WellFormednessError::WellFormednessError(SourceLoc l, const std::string& msg)
    : std::runtime_error(located(l, msg)), loc(l) {}

}  // namespace tmlcost::lang
