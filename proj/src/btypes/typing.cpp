#include "tmlcost/btypes/typing.hpp"

#include <algorithm>

namespace tmlcost::btypes {

using lang::Expr;
using lang::ExprClass;
using lang::kThisCapacityVar;
using Kind = TypeError::Kind;

TypeError::TypeError(Kind k, const std::string& msg, lang::SourceLoc l)
    : std::runtime_error(msg), kind(k), loc(l) {}

const char* kind_name(TypeError::Kind k) {
  switch (k) {
    case Kind::UnboundVariable: return "UnboundVariable";
    case Kind::RestrictionViolation: return "RestrictionViolation";
    case Kind::UnknownMethod: return "UnknownMethod";
    case Kind::GetOnNonFuture: return "GetOnNonFuture";
    case Kind::ReturnTypeMismatch: return "ReturnTypeMismatch";
    case Kind::ArityMismatch: return "ArityMismatch";
    case Kind::NotSizeTyped: return "NotSizeTyped";
    case Kind::TypeMismatch: return "TypeMismatch";
  }
  return "?";
}

namespace {

std::string describe(const std::vector<TypeError>& errs) {
  std::string out;
  for (const auto& e : errs) {
    if (!out.empty()) out += "\n";
    if (e.loc.line) out += std::to_string(e.loc.line) + ":" + std::to_string(e.loc.column) + ": ";
    out += std::string(kind_name(e.kind)) + ": ";
    if (!e.method.empty()) out += "in " + e.method + ": ";
    out += e.what();
  }
  return out;
}

}  // namespace

TypeErrors::TypeErrors(std::vector<TypeError> errs) : std::runtime_error(describe(errs)), errors(std::move(errs)) {}

bool TypeErrors::has(TypeError::Kind k) const {
  return std::any_of(errors.begin(), errors.end(), [&](const TypeError& e) { return e.kind == k; });
}

std::string NameSupply::fresh(const std::string& base) {
  std::string name = base;
  for (int i = 1; taken_.count(name); ++i) name = base + std::to_string(i);
  taken_.insert(name);
  return name;
}

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

namespace {

const ExtValue& lookup(const TypeEnv& env, const std::string& x) {
  auto it = env.vars.find(x);
  if (it == env.vars.end()) throw TypeError(Kind::UnboundVariable, "variable '" + x + "' is not bound here");
  return it->second;
}

const BasicValue& this_value(const TypeEnv& env) {
  const ExtValue& v = lookup(env, "this");
  if (v.is_future || !v.basic.is_cog()) throw TypeError(Kind::TypeMismatch, "'this' is not an object");
  return v.basic;
}

BasicValue basic(const ExtValue& v, const std::string& what) {
  if (v.is_future) throw TypeError(Kind::TypeMismatch, what + " is a future");
  return v.basic;
}

}  // namespace

ExtValue type_expr(const TypeEnv& env, const Expr& e) {
  switch (e.cls()) {
    case ExprClass::This: return lookup(env, "this");
    case ExprClass::ThisCapacity: return ExtValue::of(BasicValue::of_size(this_value(env).size));
    case ExprClass::NonSize: return ExtValue::of(BasicValue::unknown());
    case ExprClass::Size: break;
  }
  if (e.is_variable() && e.variable() != kThisCapacityVar) return lookup(env, e.variable());

  std::map<std::string, LinExpr> sub;
  for (const auto& x : e.size_expr().vars()) {
    if (x == kThisCapacityVar) {
      const BasicValue& t = this_value(env);
      if (!t.has_linear()) return ExtValue::of(BasicValue::unknown());
      sub[x] = t.linear();
      continue;
    }
    BasicValue v = basic(lookup(env, x), "variable '" + x + "'");
    if (v.is_cog()) throw TypeError(Kind::TypeMismatch, "object '" + x + "' used in arithmetic");
    if (v.is_unknown() || !v.size.is_linear()) return ExtValue::of(BasicValue::unknown());
    sub[x] = v.linear();
  }
  SizeExpr se = e.size_expr().substitute([&](const std::string& x) -> std::optional<LinExpr> {
    auto it = sub.find(x);
    if (it == sub.end()) return std::nullopt;
    return it->second;
  });
  return ExtValue::of(BasicValue::of_size(std::move(se)));
}

// ---------------------------------------------------------------------------
// Signatures
// ---------------------------------------------------------------------------

BasicValue instantiate_signature(const TypeEnv& env, const std::string& m, const std::vector<BasicValue>& actuals,
                                 NameSupply& names) {
  const Signature* sig = env.method(m);
  if (!sig) throw TypeError(Kind::UnknownMethod, "unknown method '" + m + "'");
  if (sig->header.size() != actuals.size())
    throw TypeError(Kind::ArityMismatch, "method '" + m + "' expects " + std::to_string(sig->header.size() - 1) +
                                             " arguments, got " + std::to_string(actuals.size() - 1));

  std::map<std::string, std::optional<SizeExpr>> size_sub;  // nullopt: unknown
  std::map<std::string, std::string> cog_sub;
  for (std::size_t i = 0; i < actuals.size(); ++i) {
    const BasicValue& f = sig->header[i];
    const BasicValue& a = actuals[i];
    switch (f.kind) {
      case BasicValue::Kind::Unknown: break;
      case BasicValue::Kind::Size:
        if (a.is_cog()) throw TypeError(Kind::TypeMismatch, "object passed for an Int parameter of '" + m + "'");
        if (f.has_linear() && f.linear().is_single_var())
          size_sub[f.linear().single_var()] = a.is_unknown() ? std::nullopt : std::optional<SizeExpr>(a.size);
        break;
      case BasicValue::Kind::Cog: {
        if (!a.is_cog())
          throw TypeError(i == 0 ? Kind::TypeMismatch : Kind::RestrictionViolation,
                          "the cog of argument " + std::to_string(i) + " of '" + m + "' is unknown");
        auto [it, fresh] = cog_sub.emplace(f.cog, a.cog);
        if (!fresh && it->second != a.cog)
          throw TypeError(Kind::RestrictionViolation, "'" + m + "' requires its argument in the receiver's cog " +
                                                          it->second + ", got cog " + a.cog);
        if (f.has_linear() && f.linear().is_single_var()) size_sub.emplace(f.linear().single_var(), a.size);
        break;
      }
    }
  }

  // Names of the result that the header does not bind get fresh names.
  auto substitute = [&](const SizeExpr& se) -> std::optional<SizeExpr> {
    if (se.is_linear() && se.linear().is_single_var()) {
      auto it = size_sub.find(se.linear().single_var());
      if (it != size_sub.end()) return it->second;
    }
    std::map<std::string, LinExpr> lin;
    for (const auto& x : se.vars()) {
      auto it = size_sub.find(x);
      if (it == size_sub.end()) {
        lin[x] = LinExpr::var(names.fresh(x));
        continue;
      }
      if (!it->second || !it->second->is_linear()) return std::nullopt;
      lin[x] = it->second->linear();
    }
    return se.substitute([&](const std::string& x) -> std::optional<LinExpr> { return lin.at(x); });
  };

  const BasicValue& r = sig->ret;
  switch (r.kind) {
    case BasicValue::Kind::Unknown: return r;
    case BasicValue::Kind::Size: {
      auto se = substitute(r.size);
      return se ? BasicValue::of_size(*se) : BasicValue::unknown();
    }
    case BasicValue::Kind::Cog: {
      auto it = cog_sub.find(r.cog);
      std::string c = it != cog_sub.end() ? it->second : names.fresh("d");
      auto se = substitute(r.size);
      if (!se) return BasicValue::unknown();
      return BasicValue::cog_val(c, *se);
    }
  }
  return r;
}

namespace {

void collect_returns(const lang::Stmt& s, std::vector<const Expr*>& out) {
  if (auto r = s.as<lang::ReturnStmt>()) out.push_back(&r->value);
  if (auto q = s.as<lang::SeqStmt>()) {
    collect_returns(*q->first, out);
    collect_returns(*q->rest, out);
  }
  if (auto i = s.as<lang::IfStmt>()) {
    collect_returns(*i->then_branch, out);
    collect_returns(*i->else_branch, out);
  }
}

bool used_as_callee(const lang::Stmt& s, const std::string& x) {
  if (auto q = s.as<lang::SeqStmt>()) return used_as_callee(*q->first, x) || used_as_callee(*q->rest, x);
  if (auto i = s.as<lang::IfStmt>()) return used_as_callee(*i->then_branch, x) || used_as_callee(*i->else_branch, x);
  auto a = s.as<lang::AssignStmt>();
  if (!a) return false;
  const Expr* callee = nullptr;
  if (auto c = std::get_if<lang::AsyncCallRhs>(&a->rhs)) callee = &c->callee;
  if (auto c = std::get_if<lang::SyncCallRhs>(&a->rhs)) callee = &c->callee;
  return callee && callee->is_variable() && callee->variable() == x;
}

}  // namespace

std::map<std::string, Signature> bootstrap_signatures(const lang::Program& p) {
  std::map<std::string, Signature> sigs;
  for (const auto& m : p.methods) {
    NameSupply names;
    for (const auto& prm : m.params) names.reserve(prm.name);
    std::string cog = names.fresh("c");
    std::string cap = names.fresh("e");
    BasicValue self = BasicValue::cog_val(cog, LinExpr::var(cap));

    Signature sig;
    sig.header.push_back(self);
    std::set<std::string> ints;
    for (const auto& prm : m.params) {
      if (prm.type == lang::SimpleType::Int) {
        sig.header.push_back(BasicValue::of_size(LinExpr::var(prm.name)));
        ints.insert(prm.name);
      } else if (used_as_callee(*m.body, prm.name)) {
        // Calls on a parameter are only typable when it lives in the
        // receiver's cog; call sites are checked against this.
        sig.header.push_back(self);
      } else {
        sig.header.push_back(BasicValue::cog_val(names.fresh("c"), LinExpr::var(names.fresh("e"))));
      }
    }

    std::vector<const Expr*> rets;
    collect_returns(*m.body, rets);
    if (m.return_type == lang::SimpleType::Class) {
      bool all_this = !rets.empty() && std::all_of(rets.begin(), rets.end(), [](const Expr* e) {
        return e->cls() == ExprClass::This;
      });
      if (all_this) sig.ret = self;
    } else if (!rets.empty()) {
      std::optional<SizeExpr> common;
      bool ok = true;
      for (const Expr* e : rets) {
        if (!e->is_size()) {
          ok = false;
          break;
        }
        SizeExpr se = e->size_expr().substitute([&](const std::string& x) -> std::optional<LinExpr> {
          if (x == kThisCapacityVar) return LinExpr::var(cap);
          return std::nullopt;
        });
        for (const auto& x : se.vars())
          if (x != cap && !ints.count(x)) ok = false;
        if (!ok) break;
        if (common && !(*common == se)) {
          ok = false;
          break;
        }
        common = se;
      }
      if (ok && common) sig.ret = BasicValue::of_size(*common);
    }
    sigs[m.name] = std::move(sig);
  }
  return sigs;
}

// ---------------------------------------------------------------------------
// Side-effect expressions and statements
// ---------------------------------------------------------------------------

namespace {

std::vector<BasicValue> type_args(const TypeEnv& env, const std::vector<Expr>& args) {
  std::vector<BasicValue> out;
  for (const auto& a : args) out.push_back(basic(type_expr(env, a), "argument"));
  return out;
}

BasicValue callee_value(const TypeEnv& env, const Expr& callee, const std::string& m) {
  ExtValue v = type_expr(env, callee);
  if (v.is_future || !v.basic.is_cog())
    throw TypeError(Kind::RestrictionViolation, "cannot determine the cog of the callee of '" + m + "'");
  return v.basic;
}

}  // namespace

RhsTyping type_rhs(const TypeEnv& env, const lang::Rhs& z, NameSupply& names, const std::string& target) {
  return std::visit(
      [&](const auto& rhs) -> RhsTyping {
        using T = std::decay_t<decltype(rhs)>;
        if constexpr (std::is_same_v<T, lang::PureRhs>) {
          return {type_expr(env, rhs.expr), Atom::zero(), env};
        } else if constexpr (std::is_same_v<T, lang::NewWithRhs>) {
          BasicValue k = basic(type_expr(env, rhs.capacity), "capacity");
          if (!k.is_size() || !k.size.is_linear())
            throw TypeError(Kind::NotSizeTyped, "cog capacity is not a size expression");
          std::string c = names.fresh("d");
          TypeEnv out = env;
          out.cogs[c] = k.size;
          return {ExtValue::of(BasicValue::cog_val(c, k.size)), Atom::new_cog(c, k.size), std::move(out)};
        } else if constexpr (std::is_same_v<T, lang::NewLocalRhs>) {
          return {ExtValue::of(this_value(env)), Atom::zero(), env};
        } else if constexpr (std::is_same_v<T, lang::AsyncCallRhs>) {
          BasicValue callee = callee_value(env, rhs.callee, rhs.method);
          if (!env.cogs.count(callee.cog) && this_value(env).cog != callee.cog)
            throw TypeError(Kind::RestrictionViolation,
                            "'" + rhs.method + "' is invoked on cog " + callee.cog +
                                ", which is neither the current cog nor created here");
          std::vector<BasicValue> header{callee};
          for (auto& a : type_args(env, rhs.args)) header.push_back(std::move(a));
          BasicValue ret = instantiate_signature(env, rhs.method, header, names);
          std::string f = names.fresh(target);
          TypeEnv out = env;
          out.futures[f] = FutureEntry{ret, false};
          return {ExtValue::fut(f), Atom::async_call(f, rhs.method, std::move(header), ret), std::move(out)};
        } else if constexpr (std::is_same_v<T, lang::SyncCallRhs>) {
          BasicValue callee = callee_value(env, rhs.callee, rhs.method);
          if (this_value(env).cog != callee.cog)
            throw TypeError(Kind::RestrictionViolation,
                            "synchronous call '" + rhs.method + "' on cog " + callee.cog + " outside the current cog");
          std::vector<BasicValue> header{callee};
          for (auto& a : type_args(env, rhs.args)) header.push_back(std::move(a));
          BasicValue ret = instantiate_signature(env, rhs.method, header, names);
          return {ExtValue::of(ret), Atom::sync_call(rhs.method, std::move(header), ret), env};
        } else {
          ExtValue v = type_expr(env, rhs.future);
          if (!v.is_future) throw TypeError(Kind::GetOnNonFuture, "get on a value that is not a future");
          auto it = env.futures.find(v.future);
          if (it == env.futures.end()) throw TypeError(Kind::UnboundVariable, "unknown future " + v.future);
          if (it->second.checked) return {ExtValue::of(it->second.value), Atom::zero(), env};
          TypeEnv out = env;
          out.futures[v.future].checked = true;
          return {ExtValue::of(it->second.value), Atom::sync(v.future), std::move(out)};
        }
      },
      z);
}

namespace {

BTypePtr leaf(Atom a, TypeEnv env) { return BType::leaf(std::move(a), std::make_shared<const TypeEnv>(std::move(env))); }

BTypePtr type_stmt_at(const TypeEnv& env, const lang::Stmt& s, NameSupply& names) {
  if (auto q = s.as<lang::SeqStmt>()) {
    BTypePtr first = type_stmt(env, *q->first, names);
    return graft(first, [&](const Atom& a, const TypeEnv& gi) {
      return BType::seq(a, type_stmt(gi, *q->rest, names));
    });
  }
  if (s.as<lang::SkipStmt>()) return leaf(Atom::zero(), env);
  if (auto a = s.as<lang::AssignStmt>()) {
    RhsTyping r = type_rhs(env, a->rhs, names, a->var);
    r.env.vars[a->var] = r.value;
    return leaf(std::move(r.atom), std::move(r.env));
  }
  if (auto j = s.as<lang::JobStmt>()) {
    BasicValue k = basic(type_expr(env, j->cycles), "job");
    if (!k.is_size() || !k.size.is_linear()) throw TypeError(Kind::NotSizeTyped, "job amount is not a size expression");
    const BasicValue& self = this_value(env);
    if (!self.has_linear()) throw TypeError(Kind::NotSizeTyped, "capacity is not a size expression");
    return leaf(Atom::cost(k.linear(), self.linear()), env);
  }
  if (auto r = s.as<lang::ReturnStmt>()) {
    BasicValue v = basic(type_expr(env, r->value), "returned value");
    const BasicValue& destiny = basic(lookup(env, "destiny"), "destiny");
    if (!destiny.is_unknown() && !(v == destiny))
      throw TypeError(Kind::ReturnTypeMismatch, "returns " + v.str() + " but the signature says " + destiny.str());
    return leaf(Atom::zero(), env);
  }
  if (auto i = s.as<lang::IfStmt>()) {
    BasicValue c = basic(type_expr(env, i->cond), "condition");
    if (c.is_cog()) throw TypeError(Kind::TypeMismatch, "object used as a condition");
    BTypePtr b1 = type_stmt(env, *i->then_branch, names);
    BTypePtr b2 = type_stmt(env, *i->else_branch, names);
    if (c.is_unknown()) return BType::choice(b1, b2);
    return BType::choice(BType::guarded(c.size, b1), BType::guarded(c.size.negate(), b2));
  }
  throw TypeError(Kind::TypeMismatch, "unexpected statement");
}

}  // namespace

BTypePtr type_stmt(const TypeEnv& env, const lang::Stmt& s, NameSupply& names) {
  try {
    return type_stmt_at(env, s, names);
  } catch (TypeError& e) {
    if (!e.loc.line) e.loc = s.loc;
    throw;
  }
}

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

namespace {

void reserve_value(NameSupply& names, const BasicValue& v) {
  if (v.is_cog()) names.reserve(v.cog);
  if (!v.is_unknown())
    for (const auto& x : v.size.vars()) names.reserve(x);
}

}  // namespace

MethodBType type_method(const std::shared_ptr<const std::map<std::string, Signature>>& sigs, const lang::MethodDecl& m) {
  const Signature& sig = sigs->at(m.name);
  NameSupply names;
  for (const auto& v : sig.header) reserve_value(names, v);
  for (const auto& p : m.params) names.reserve(p.name);

  TypeEnv env;
  env.methods = sigs;
  env.vars["this"] = ExtValue::of(sig.header[0]);
  env.vars["destiny"] = ExtValue::of(sig.ret);
  for (std::size_t i = 0; i < m.params.size(); ++i) env.vars[m.params[i].name] = ExtValue::of(sig.header[i + 1]);

  BTypePtr body = type_stmt(env, *m.body, names);
  return {m.name, sig.header, erase_envs(body), sig.ret};
}

BProgram type_program(const lang::Program& p) {
  auto sigs = std::make_shared<const std::map<std::string, Signature>>(bootstrap_signatures(p));
  BProgram out;
  std::vector<TypeError> errors;
  for (const auto& m : p.methods) {
    try {
      out.methods.push_back(type_method(sigs, m));
    } catch (TypeError& e) {
      e.method = m.name;
      if (!e.loc.line) e.loc = m.loc;
      errors.push_back(e);
    }
  }

  try {
    NameSupply names;
    names.reserve(kStartCog);
    TypeEnv env;
    env.methods = sigs;
    BasicValue self = BasicValue::cog_val(kStartCog, LinExpr(p.main.capacity));
    env.vars["this"] = ExtValue::of(self);
    env.vars["destiny"] = ExtValue::of(BasicValue::unknown());
    std::vector<BasicValue> header{self};
    for (const auto& l : p.main.locals) {
      names.reserve(l.name);
      if (l.type == lang::FullType{lang::SimpleType::Int, false}) {
        env.vars[l.name] = ExtValue::of(BasicValue::of_size(LinExpr::var(l.name)));
        header.push_back(env.vars[l.name].basic);
      }
    }
    BTypePtr body = type_stmt(env, *p.main.body, names);
    out.main = {"main", std::move(header), erase_envs(body), BasicValue::unknown()};
  } catch (TypeError& e) {
    e.method = "main";
    errors.push_back(e);
  }

  if (!errors.empty()) throw TypeErrors(std::move(errors));
  return out;
}

}  // namespace tmlcost::btypes
