#include "lexer.hpp"
#include "tmlcost/lang/syntax.hpp"

#include <set>

namespace tmlcost::lang {

namespace {

const std::set<std::string> kReserved = {"Int", "Class", "Fut",  "if",   "else", "job",  "return", "new",
                                         "local", "with", "get", "this", "and",  "or",   "true",   "false"};

class Parser {
public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  Program program() {
    Program p;
    while (peek().kind == Tok::Ident && (peek().text == "Int" || peek().text == "Class")) p.methods.push_back(method());
    if (peek().kind != Tok::LBrace) fail("expected a method declaration or the main block");
    std::vector<Local> locals;
    p.main.body = block(locals);
    p.main.locals = std::move(locals);
    keyword("with");
    p.main.capacity = rational_literal();
    expect(Tok::End);
    return p;
  }

  Expr expression_only() {
    auto e = expr();
    expect(Tok::End);
    return classify_expr(*e);
  }

private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.loc, msg + " (got " + got + ")");
  }

  const Token& expect(Tok k) {
    if (peek().kind != k) fail(std::string("expected ") + tok_name(k));
    return next();
  }

  bool accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }

  bool at_keyword(const char* kw, std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == kw;
  }

  void keyword(const char* kw) {
    if (!at_keyword(kw)) fail(std::string("expected '") + kw + "'");
    next();
  }

  std::string identifier(const char* what) {
    if (peek().kind != Tok::Ident || kReserved.count(peek().text)) fail(std::string("expected ") + what);
    return next().text;
  }

  SimpleType simple_type() {
    if (at_keyword("Int")) {
      next();
      return SimpleType::Int;
    }
    if (at_keyword("Class")) {
      next();
      return SimpleType::Class;
    }
    fail("expected 'Int' or 'Class'");
  }

  bool at_type() const { return at_keyword("Int") || at_keyword("Class") || at_keyword("Fut"); }

  FullType full_type() {
    if (at_keyword("Fut")) {
      next();
      expect(Tok::Lt);
      auto inner = simple_type();
      expect(Tok::Gt);
      return {inner, true};
    }
    return {simple_type(), false};
  }

  Rational rational_literal() {
    bool neg = accept(Tok::Minus);
    Rational k = Rational::parse(expect(Tok::Number).text);
    if (accept(Tok::Slash)) {
      Rational d = Rational::parse(expect(Tok::Number).text);
      if (d.is_zero()) fail("zero denominator");
      k /= d;
    }
    return neg ? -k : k;
  }

  MethodDecl method() {
    MethodDecl m;
    m.loc = peek().loc;
    m.return_type = simple_type();
    m.name = identifier("a method name");
    expect(Tok::LParen);
    if (peek().kind != Tok::RParen) {
      do {
        Param prm;
        prm.type = simple_type();
        prm.name = identifier("a parameter name");
        m.params.push_back(std::move(prm));
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen);
    m.body = block(m.locals);
    return m;
  }

  StmtPtr block(std::vector<Local>& locals) {
    expect(Tok::LBrace);
    while (at_type()) {
      Local l;
      l.type = full_type();
      l.name = identifier("a variable name");
      expect(Tok::Semi);
      locals.push_back(std::move(l));
    }
    std::vector<StmtPtr> stmts;
    while (peek().kind != Tok::RBrace) stmts.push_back(statement(locals));
    expect(Tok::RBrace);
    return Stmt::sequence(stmts);
  }

  StmtPtr statement(std::vector<Local>& locals) {
    SourceLoc loc = peek().loc;
    if (at_keyword("if")) {
      next();
      expect(Tok::LParen);
      Expr cond = classify_expr(*expr());
      expect(Tok::RParen);
      StmtPtr then_b = block(locals);
      StmtPtr else_b;
      if (at_keyword("else")) {
        next();
        else_b = block(locals);
      } else {
        else_b = Stmt::make(SkipStmt{}, loc);
      }
      return Stmt::make(IfStmt{std::move(cond), then_b, else_b}, loc);
    }
    if (at_keyword("job")) {
      next();
      expect(Tok::LParen);
      Expr e = classify_expr(*expr());
      expect(Tok::RParen);
      expect(Tok::Semi);
      return Stmt::make(JobStmt{std::move(e)}, loc);
    }
    if (at_keyword("return")) {
      next();
      Expr e = classify_expr(*expr());
      expect(Tok::Semi);
      return Stmt::make(ReturnStmt{std::move(e)}, loc);
    }
    if (at_type()) fail("declarations must precede the statements of a block");
    std::string var = identifier("a statement");
    expect(Tok::Assign);
    Rhs r = rhs();
    expect(Tok::Semi);
    return Stmt::make(AssignStmt{std::move(var), std::move(r)}, loc);
  }

  Rhs rhs() {
    if (at_keyword("new")) {
      next();
      if (at_keyword("local")) {
        next();
        keyword("Class");
        return NewLocalRhs{};
      }
      keyword("Class");
      keyword("with");
      return NewWithRhs{classify_expr(*expr())};
    }
    Expr target = classify_expr(*expr());
    if (accept(Tok::Bang)) {
      std::string m = identifier("a method name");
      return AsyncCallRhs{std::move(target), std::move(m), call_args()};
    }
    if (accept(Tok::Dot)) {
      if (at_keyword("get")) {
        next();
        return GetRhs{std::move(target)};
      }
      std::string m = identifier("a method name or 'get'");
      return SyncCallRhs{std::move(target), std::move(m), call_args()};
    }
    return PureRhs{std::move(target)};
  }

  std::vector<Expr> call_args() {
    expect(Tok::LParen);
    std::vector<Expr> args;
    if (peek().kind != Tok::RParen) {
      do {
        args.push_back(classify_expr(*expr()));
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen);
    return args;
  }

  // Precedence climbing: or < and < comparison < additive < multiplicative < unary.
  RawExprPtr expr() { return disjunction(); }

  RawExprPtr disjunction() {
    auto lhs = conjunction();
    while (at_keyword("or")) {
      next();
      lhs = RawExpr::binary(RawExpr::Op::Or, lhs, conjunction());
    }
    return lhs;
  }

  RawExprPtr conjunction() {
    auto lhs = comparison();
    while (at_keyword("and")) {
      next();
      lhs = RawExpr::binary(RawExpr::Op::And, lhs, comparison());
    }
    return lhs;
  }

  RawExprPtr comparison() {
    auto lhs = additive();
    if (accept(Tok::Le)) return RawExpr::binary(RawExpr::Op::Le, lhs, additive());
    if (accept(Tok::Ge)) {
      auto rhs = additive();
      return RawExpr::binary(RawExpr::Op::Le, rhs, lhs);
    }
    if (peek().kind == Tok::Lt || peek().kind == Tok::Gt) fail("only '<=' and '>=' comparisons are supported");
    return lhs;
  }

  RawExprPtr additive() {
    auto lhs = multiplicative();
    for (;;) {
      if (accept(Tok::Plus)) {
        lhs = RawExpr::binary(RawExpr::Op::Add, lhs, multiplicative());
      } else if (accept(Tok::Minus)) {
        lhs = RawExpr::binary(RawExpr::Op::Sub, lhs, multiplicative());
      } else {
        return lhs;
      }
    }
  }

  RawExprPtr multiplicative() {
    auto lhs = unary();
    for (;;) {
      if (accept(Tok::Star)) {
        lhs = RawExpr::binary(RawExpr::Op::Mul, lhs, unary());
      } else if (accept(Tok::Slash)) {
        lhs = RawExpr::binary(RawExpr::Op::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  RawExprPtr unary() {
    if (accept(Tok::Minus)) return RawExpr::binary(RawExpr::Op::Sub, RawExpr::number(0), unary());
    return primary();
  }

  RawExprPtr primary() {
    if (peek().kind == Tok::Number) return RawExpr::number(Rational::parse(next().text));
    if (accept(Tok::LParen)) {
      auto e = expr();
      expect(Tok::RParen);
      return e;
    }
    if (at_keyword("true")) {
      next();
      return RawExpr::number(1);
    }
    if (at_keyword("false")) {
      next();
      return RawExpr::number(0);
    }
    if (at_keyword("this")) {
      next();
      if (peek().kind == Tok::Dot && at_keyword("capacity", 1) && peek(2).kind != Tok::LParen) {
        next();
        next();
        return RawExpr::leaf(RawExpr::Op::ThisCapacity);
      }
      return RawExpr::leaf(RawExpr::Op::This);
    }
    return RawExpr::variable(identifier("an expression"));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Well-formedness
// ---------------------------------------------------------------------------

class WellFormedness {
public:
  explicit WellFormedness(std::set<std::string> scope) : scope_(std::move(scope)) {}

  void stmt(const Stmt& s, bool has_continuation) {
    if (auto seq = s.as<SeqStmt>()) {
      stmt(*seq->first, true);
      stmt(*seq->rest, has_continuation);
    } else if (auto i = s.as<IfStmt>()) {
      expr(i->cond, s.loc);
      stmt(*i->then_branch, has_continuation);
      stmt(*i->else_branch, has_continuation);
    } else if (auto r = s.as<ReturnStmt>()) {
      if (has_continuation) throw WellFormednessError(s.loc, "return statement has a continuation");
      expr(r->value, s.loc);
    } else if (auto j = s.as<JobStmt>()) {
      expr(j->cycles, s.loc);
    } else if (auto a = s.as<AssignStmt>()) {
      if (!scope_.count(a->var)) throw WellFormednessError(s.loc, "assignment to undeclared variable '" + a->var + "'");
      rhs(a->rhs, s.loc);
    }
  }

private:
  void rhs(const Rhs& r, SourceLoc loc) {
    std::visit(
        [&](const auto& z) {
          using T = std::decay_t<decltype(z)>;
          if constexpr (std::is_same_v<T, PureRhs>) {
            expr(z.expr, loc);
          } else if constexpr (std::is_same_v<T, AsyncCallRhs>) {
            expr(z.callee, loc);
            for (const auto& a : z.args) expr(a, loc);
          } else if constexpr (std::is_same_v<T, SyncCallRhs>) {
            expr(z.callee, loc);
            for (const auto& a : z.args) {
              if (!a.is_variable())
                throw WellFormednessError(loc, "arguments of synchronous call '" + z.method + "' must be variables");
              expr(a, loc);
            }
          } else if constexpr (std::is_same_v<T, GetRhs>) {
            expr(z.future, loc);
          } else if constexpr (std::is_same_v<T, NewWithRhs>) {
            expr(z.capacity, loc);
          }
        },
        r);
  }

  void expr(const Expr& e, SourceLoc loc) {
    if (e.cls() == ExprClass::Size) {
      for (const auto& v : e.size_expr().vars()) check_var(v, loc);
    } else if (e.cls() == ExprClass::NonSize) {
      raw(e.raw(), loc);
    }
  }

  void raw(const RawExpr& r, SourceLoc loc) {
    if (r.op == RawExpr::Op::Var) check_var(r.name, loc);
    if (r.lhs) raw(*r.lhs, loc);
    if (r.rhs) raw(*r.rhs, loc);
  }

  void check_var(const std::string& v, SourceLoc loc) {
    if (v == kThisCapacityVar) return;
    if (!scope_.count(v)) throw WellFormednessError(loc, "undeclared variable '" + v + "'");
  }

  std::set<std::string> scope_;
};

std::set<std::string> declare(const std::vector<std::string>& names, SourceLoc loc, const std::string& where) {
  std::set<std::string> scope;
  for (const auto& n : names) {
    if (n == "destiny") throw WellFormednessError(loc, "'destiny' is reserved (in " + where + ")");
    if (!scope.insert(n).second) throw WellFormednessError(loc, "duplicate name '" + n + "' in " + where);
  }
  return scope;
}

}  // namespace

void check_well_formed(const Program& p) {
  std::set<std::string> method_names;
  for (const auto& m : p.methods) {
    if (!method_names.insert(m.name).second) throw WellFormednessError(m.loc, "duplicate method '" + m.name + "'");
    std::vector<std::string> names;
    for (const auto& prm : m.params) names.push_back(prm.name);
    for (const auto& l : m.locals) names.push_back(l.name);
    WellFormedness wf(declare(names, m.loc, "method '" + m.name + "'"));
    wf.stmt(*m.body, false);
  }
  if (p.main.capacity.sign() <= 0) throw WellFormednessError({}, "main capacity must be positive");
  std::vector<std::string> names;
  for (const auto& l : p.main.locals) names.push_back(l.name);
  WellFormedness wf(declare(names, {}, "the main block"));
  wf.stmt(*p.main.body, false);
}

Program parse_program_unchecked(std::string_view text) { return Parser(text).program(); }

Program parse_program(std::string_view text) {
  Program p = parse_program_unchecked(text);
  check_well_formed(p);
  return p;
}

Expr parse_expr(std::string_view text) { return Parser(text).expression_only(); }

}  // namespace tmlcost::lang
