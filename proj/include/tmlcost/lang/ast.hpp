#pragma once

#include "tmlcost/lang/linear.hpp"
#include "tmlcost/rational.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tmlcost::lang {

struct SourceLoc {
  int line = 0;
  int column = 0;
};

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

/// Unclassified expression tree as written in the source. Non-size
/// expressions are kept in this form.
struct RawExpr {
  enum class Op { Num, Var, This, ThisCapacity, Add, Sub, Mul, Div, Le, And, Or };

  Op op = Op::Num;
  Rational num;
  std::string name;
  std::shared_ptr<const RawExpr> lhs, rhs;

  static std::shared_ptr<const RawExpr> number(Rational k);
  static std::shared_ptr<const RawExpr> variable(std::string n);
  static std::shared_ptr<const RawExpr> leaf(Op op);
  static std::shared_ptr<const RawExpr> binary(Op op, std::shared_ptr<const RawExpr> a,
                                               std::shared_ptr<const RawExpr> b);

  friend bool operator==(const RawExpr& a, const RawExpr& b);
};

using RawExprPtr = std::shared_ptr<const RawExpr>;

enum class ExprClass { This, ThisCapacity, Size, NonSize };

/// A pure expression, classified when it is built: `this`, `this.capacity`,
/// a size expression (linear arithmetic, comparisons, and/or) or anything
/// else (kept raw).
class Expr {
public:
  Expr() : cls_(ExprClass::Size) {}
  static Expr this_ref() { return Expr(ExprClass::This); }
  static Expr this_capacity() { return Expr(ExprClass::ThisCapacity); }
  static Expr size(SizeExpr se);
  static Expr non_size(RawExprPtr raw);

  ExprClass cls() const { return cls_; }
  bool is_size() const { return cls_ == ExprClass::Size; }
  const SizeExpr& size_expr() const { return size_; }
  const RawExpr& raw() const { return *raw_; }

  /// True for a bare variable reference (a size expression `x`).
  bool is_variable() const;
  const std::string& variable() const { return size_.linear().single_var(); }

  friend bool operator==(const Expr& a, const Expr& b);

private:
  explicit Expr(ExprClass c) : cls_(c) {}
  ExprClass cls_;
  SizeExpr size_;
  RawExprPtr raw_;
};

/// Decides whether `raw` fits the size-expression grammar. Subtraction of
/// linear terms is normalized to addition with negated coefficients; `k*ve`
/// and `ve*k` are linear; division is always a non-size expression.
Expr classify_expr(const RawExpr& raw);

/// Linear normal form of `raw`, or nullopt if it is not a `ve`.
std::optional<LinExpr> to_linear(const RawExpr& raw);

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

struct PureRhs {
  Expr expr;
  friend bool operator==(const PureRhs&, const PureRhs&) = default;
};
struct AsyncCallRhs {
  Expr callee;
  std::string method;
  std::vector<Expr> args;
  friend bool operator==(const AsyncCallRhs&, const AsyncCallRhs&) = default;
};
struct SyncCallRhs {
  Expr callee;
  std::string method;
  std::vector<Expr> args;
  friend bool operator==(const SyncCallRhs&, const SyncCallRhs&) = default;
};
struct GetRhs {
  Expr future;
  friend bool operator==(const GetRhs&, const GetRhs&) = default;
};
struct NewWithRhs {
  Expr capacity;
  friend bool operator==(const NewWithRhs&, const NewWithRhs&) = default;
};
struct NewLocalRhs {
  friend bool operator==(const NewLocalRhs&, const NewLocalRhs&) = default;
};

using Rhs = std::variant<PureRhs, AsyncCallRhs, SyncCallRhs, GetRhs, NewWithRhs, NewLocalRhs>;

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct AssignStmt {
  std::string var;
  Rhs rhs;
};
struct IfStmt {
  Expr cond;
  StmtPtr then_branch, else_branch;
};
struct JobStmt {
  Expr cycles;
};
struct ReturnStmt {
  Expr value;
};
/// `first ; rest`, always right-associated.
struct SeqStmt {
  StmtPtr first, rest;
};
/// Empty block.
struct SkipStmt {};

struct Stmt {
  using Node = std::variant<AssignStmt, IfStmt, JobStmt, ReturnStmt, SeqStmt, SkipStmt>;
  Node node;
  SourceLoc loc;

  template <class T>
  const T* as() const { return std::get_if<T>(&node); }

  static StmtPtr make(Node n, SourceLoc loc = {});
  /// Right-associated sequence; an empty list gives a SkipStmt.
  static StmtPtr sequence(const std::vector<StmtPtr>& stmts);
};

/// Structural equality; source locations are ignored.
bool same_stmt(const Stmt& a, const Stmt& b);

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

enum class SimpleType { Int, Class };

struct FullType {
  SimpleType base = SimpleType::Int;
  bool future = false;
  friend bool operator==(const FullType&, const FullType&) = default;
};

struct Param {
  SimpleType type;
  std::string name;
  friend bool operator==(const Param&, const Param&) = default;
};

struct Local {
  FullType type;
  std::string name;
  friend bool operator==(const Local&, const Local&) = default;
};

struct MethodDecl {
  std::string name;
  SimpleType return_type = SimpleType::Int;
  std::vector<Param> params;
  std::vector<Local> locals;
  StmtPtr body;
  SourceLoc loc;
};

struct MainBody {
  std::vector<Local> locals;
  StmtPtr body;
  Rational capacity{1};
};

struct Program {
  std::vector<MethodDecl> methods;
  MainBody main;

  const MethodDecl* find_method(const std::string& name) const;
};

bool operator==(const MethodDecl& a, const MethodDecl& b);
bool operator==(const Program& a, const Program& b);

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class ParseError : public std::runtime_error {
public:
  ParseError(SourceLoc loc, const std::string& msg);
  SourceLoc loc;
};

class WellFormednessError : public std::runtime_error {
public:
  WellFormednessError(SourceLoc loc, const std::string& msg);
  SourceLoc loc;
};

}  // namespace tmlcost::lang
